#include "doctest.h"

#include "epigossip/cli.hpp"
#include "epigossip/error.hpp"
#include "epigossip/io.hpp"
#include "epigossip/planner.hpp"

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

using namespace epigossip;
namespace fs = std::filesystem;

namespace {

std::string fixture(const std::string& name) { return std::string(EPIGOSSIP_FIXTURES) + "/" + name; }

struct Run {
    int code;
    std::string out;
    std::string err;
};

Run cli(std::vector<std::string> args) {
    std::ostringstream out;
    std::ostringstream err;
    const int code = run_cli(args, out, err);
    return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

fs::path scratch() {
    const fs::path dir = fs::temp_directory_path() / "epigossip_cli_tests";
    fs::create_directories(dir);
    return dir;
}

int error_line(std::string_view text) {
    try {
        parse_problem(text);
    } catch (const ParseError& e) {
        return e.line();
    }
    return 0;
}

} // namespace

TEST_CASE("parse_problem") {
    const auto inst = parse_problem(slurp(fixture("two_agents.gsp")));
    CHECK(inst.agent_count() == 2);
    CHECK(inst.graph.edge_count() == 1);
    CHECK(inst.goals.size() == 1);
    CHECK(inst.depth_cap == 1);
    CHECK_FALSE(inst.allow_change);

    const auto arc = parse_problem(slurp(fixture("arc.gsp")));
    CHECK(arc.graph.directed());
    CHECK(arc.graph.has_edge(1, 2));
    CHECK_FALSE(arc.graph.has_edge(2, 1));

    const auto k4 = parse_problem(slurp(fixture("k4.gsp")));
    CHECK(k4.goals.size() == 12);
    CHECK(k4.depth_cap == 1);

    const auto deep = parse_problem("agents 3\nedge 1 2\nedge 2 3\ngoal + 3 2 1\n");
    CHECK(deep.depth_cap == 2);
    CHECK(parse_problem("agents 3\ndepth 3\ngoal + 1 2\n").depth_cap == 3);
}

TEST_CASE("parse_problem errors") {
    try {
        parse_problem(slurp(fixture("self_evident.gsp")));
        FAIL("expected a parse error");
    } catch (const ParseError& e) {
        CHECK(e.line() == 3);
        CHECK(std::string(e.what()).find("self-evident") != std::string::npos);
    }
    CHECK(error_line("agents 2\nbogus 1\n") == 2);
    CHECK(error_line("agents 2\nedge 1 3\n") == 2);
    CHECK(error_line("agents 2\nedge 1 1\n") == 2);
    CHECK(error_line("agents 3\ndepth 1\ngoal + 1 2 3\n") == 3);
    CHECK(error_line("agents 2\nedge 1 2\nmode one-way\n") == 3);
    CHECK(error_line("edge 1 2\n") == 1);
    CHECK(error_line("agents 2\nmode sideways\n") == 2);
    CHECK(error_line("agents 2\ngoal * 1 2\n") == 2);
    CHECK(error_line("agents 2\nchange maybe\n") == 2);
    CHECK(error_line("agents 2\nedge 1\n") == 2);
}

TEST_CASE("problem text round trip") {
    for (const char* name : {"two_agents.gsp", "forget.gsp", "k4.gsp", "arc.gsp"}) {
        const auto inst = parse_problem(slurp(fixture(name)));
        const std::string once = serialize_problem(inst);
        CHECK(serialize_problem(parse_problem(once)) == once);
        CHECK(parse_problem(once) == inst);
    }
    for (int n = 2; n <= 4; ++n)
        for (Mode mode : {Mode::two_way, Mode::one_way, Mode::parallel}) {
            const auto inst = full_gossip_instance(n, 2, mode);
            const std::string text = serialize_problem(inst);
            CHECK(parse_problem(text) == inst);
            CHECK(serialize_problem(parse_problem(text)) == text);
        }
}

TEST_CASE("plan text") {
    const Plan p = parse_plan(slurp(fixture("forget.gpl")));
    REQUIRE(p.length() == 2);
    CHECK(p.items[0] == PlanItem{TwoWayCall{1, 2}});
    CHECK(p.items[1] == PlanItem{Change{1}});

    const Plan par = parse_plan("step call 1 2; call 3 4\nstep call 1 3\n");
    CHECK(par.mode == Mode::parallel);
    CHECK(par.length() == 2);
    const Plan sends = parse_plan("# comment\nsend 2 1\n");
    CHECK(sends.mode == Mode::one_way);
    CHECK(parse_plan("change 2\n", Mode::one_way).mode == Mode::one_way);

    for (const Plan& q : {p, par, sends})
        CHECK(parse_plan(serialize_plan(q)) == q);
    CHECK_THROWS_AS(parse_plan("call 1 2\nsend 1 2\n"), ParseError);
    CHECK_THROWS_AS(parse_plan("call 1\n"), ParseError);
    CHECK_THROWS_AS(parse_plan("shout 1 2\n"), ParseError);
}

TEST_CASE("stats csv") {
    const auto two = emit_stats_csv(sweep_stats(Mode::two_way, 6, 6, 2, 2, false));
    CHECK(two == "mode,n,d,protocol,calls_or_steps,formula,match\ntwo-way,6,2,bipartite,12,12,true\n");
    CHECK(emit_stats_csv(sweep_stats(Mode::one_way, 4, 4, 1, 1, false)).find("one-way,4,1,directional,6,6,true\n") !=
          std::string::npos);
    CHECK(emit_stats_csv(sweep_stats(Mode::parallel, 13, 13, 1, 1, false)).find("parallel,13,1,parallel,5,5,true\n") !=
          std::string::npos);
    for (const auto& row : sweep_stats(Mode::two_way, 4, 10, 1, 3, false)) {
        CHECK(row.match);
        CHECK(row.measured == (row.d + 1) * (row.n - 2));
    }
}

TEST_CASE("cli exit codes") {
    const fs::path dir = scratch();

    auto r = cli({"verify", fixture("forget.gsp"), fixture("forget.gpl")});
    CHECK(r.code == exit_ok);
    CHECK(r.out.find("success") != std::string::npos);

    r = cli({"verify", fixture("forget_nochange.gsp"), fixture("forget.gpl")});
    CHECK(r.code == exit_failure);

    r = cli({"verify", fixture("k4.gsp"), fixture("off_graph.gpl")});
    CHECK(r.code == exit_failure);

    r = cli({"verify", fixture("self_evident.gsp"), fixture("forget.gpl")});
    CHECK(r.code == exit_usage);
    CHECK(r.err.find("self-evident") != std::string::npos);

    r = cli({"search", fixture("k4.gsp"), "--max", "3"});
    CHECK(r.code == exit_failure);
    CHECK(r.out.find("no plan within budget") != std::string::npos);
    CHECK(r.out.find("proven absent at <= 3") != std::string::npos);

    r = cli({"search", fixture("k4.gsp"), "--max", "6", "--threads", "2"});
    CHECK(r.code == exit_ok);
    CHECK(parse_plan(r.out).length() == 4);

    r = cli({"search", fixture("k4.gsp"), "--max", "6", "--budget", "3"});
    CHECK(r.code == exit_failure);

    r = cli({"solve-neg", fixture("forget_nochange.gsp")});
    CHECK(r.code == exit_failure);
    r = cli({"solve-neg", fixture("forget.gsp")});
    CHECK(r.code == exit_ok);
    CHECK(parse_plan(r.out) == parse_plan(slurp(fixture("forget.gpl"))));

    const std::string plan_out = (dir / "k4.gpl").string();
    r = cli({"plan", fixture("k4.gsp"), "-o", plan_out});
    CHECK(r.code == exit_ok);
    CHECK(cli({"verify", fixture("k4.gsp"), plan_out}).code == exit_ok);

    const std::string reduced = (dir / "either.gsp").string();
    CHECK(cli({"reduce", fixture("either.cnf"), "-o", reduced}).code == exit_ok);
    CHECK(cli({"solve-neg", reduced}).code == exit_ok);
    const std::string unsat = (dir / "contradiction.gsp").string();
    CHECK(cli({"reduce", fixture("contradiction.cnf"), "-o", unsat}).code == exit_ok);
    CHECK(cli({"solve-neg", unsat}).code == exit_failure);

    r = cli({"stats", "--mode", "two-way", "--n", "4..6", "--d", "1..2", "--verify"});
    CHECK(r.code == exit_ok);
    CHECK(r.out.rfind("mode,n,d,protocol,calls_or_steps,formula,match\n", 0) == 0);

    const std::string hp = (dir / "h.gsp").string();
    const std::string hq = (dir / "h.gpl").string();
    CHECK(cli({"hierarchy", "0", "1", "2", "--problem-out", hp, "--plan-out", hq}).code == exit_ok);
    CHECK(cli({"verify", hp, hq}).code == exit_ok);

    CHECK(cli({}).code == exit_usage);
    CHECK(cli({"frobnicate"}).code == exit_usage);
    CHECK(cli({"search", fixture("k4.gsp")}).code == exit_usage);
    CHECK(cli({"verify", fixture("missing.gsp"), fixture("forget.gpl")}).code == exit_usage);
    CHECK(cli({"stats", "--mode", "two-way", "--n", "4-6", "--d", "1..2"}).code == exit_usage);
    CHECK(cli({"--help"}).code == exit_ok);
}

TEST_CASE("cli output does not depend on threads") {
    const auto a = cli({"search", fixture("k4.gsp"), "--max", "6", "--threads", "1"});
    const auto b = cli({"search", fixture("k4.gsp"), "--max", "6", "--threads", "3"});
    CHECK(parse_plan(a.out) == parse_plan(b.out));
}
