#include "epigossip/cli.hpp"

#include "epigossip/error.hpp"
#include "epigossip/io.hpp"
#include "epigossip/planner.hpp"
#include "epigossip/protocols.hpp"
#include "epigossip/reduction.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

namespace epigossip {

namespace {

// Input the user pointed at is unusable.
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw UsageError("cannot read " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

ProblemInstance load_problem(const std::string& path) {
    const std::string text = slurp(path);
    try {
        ProblemInstance inst = parse_problem(text);
        inst.validate();
        return inst;
    } catch (const ParseError& e) {
        throw UsageError(path + ":" + e.what());
    } catch (const std::invalid_argument& e) {
        throw UsageError(path + ": " + e.what());
    }
}

void write_output(const std::string& path, const std::string& text, std::ostream& out) {
    if (path.empty() || path == "-") {
        out << text;
        return;
    }
    std::ofstream f(path, std::ios::binary);
    if (!f)
        throw UsageError("cannot write " + path);
    f << text;
}

std::pair<int, int> parse_range(const std::string& text, const char* what) {
    const auto dots = text.find("..");
    try {
        std::size_t used = 0;
        if (dots == std::string::npos) {
            const int v = std::stoi(text, &used);
            if (used != text.size())
                throw std::invalid_argument(text);
            return {v, v};
        }
        const std::string lo = text.substr(0, dots);
        const std::string hi = text.substr(dots + 2);
        const int a = std::stoi(lo, &used);
        if (used != lo.size())
            throw std::invalid_argument(text);
        const int b = std::stoi(hi, &used);
        if (used != hi.size())
            throw std::invalid_argument(text);
        return {a, b};
    } catch (const std::logic_error&) {
        throw UsageError(std::string("bad ") + what + " range '" + text + "' (expected A..B)");
    }
}

void report_search(const SearchResult& r, Mode mode, std::ostream& out, std::ostream& err) {
    const char* unit = mode == Mode::parallel ? "steps" : "actions";
    switch (r.status) {
    case SearchStatus::found:
        out << "# optimal length " << r.plan->length() << " " << unit;
        if (r.exhausted_length >= 0)
            out << "; proven absent at <= " << r.exhausted_length;
        out << " (" << r.nodes << " nodes)\n";
        out << serialize_plan(*r.plan);
        break;
    case SearchStatus::proven_absent:
        out << "no plan within budget: proven absent at <= " << r.exhausted_length << " " << unit << " ("
            << r.nodes << " nodes)\n";
        break;
    case SearchStatus::budget_exhausted:
        err << "node budget exhausted after " << r.nodes << " nodes";
        if (r.exhausted_length >= 0)
            err << "; proven absent at <= " << r.exhausted_length;
        err << "\n";
        break;
    }
}

} // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Epistemic gossip planning: protocols, verification, search and the SAT reduction",
                 "epigossip"};
    app.require_subcommand(1);

    std::string problem_path, plan_path, output, cnf_path, mode_text, n_text, d_text;
    std::string problem_out, plan_out;
    bool trace = false, no_prune = false, shortest = false, verify_rows = false;
    int max_len = -1, threads = 1;
    std::uint64_t budget = 0;
    std::vector<int> levels;

    auto* plan_cmd = app.add_subcommand("plan", "Generate a protocol for a full-gossip problem");
    plan_cmd->add_option("problem", problem_path, "Problem file")->required();
    plan_cmd->add_option("-o,--output", output, "Plan file (default: stdout)");

    auto* verify_cmd = app.add_subcommand("verify", "Check a plan against a problem");
    verify_cmd->add_option("problem", problem_path, "Problem file")->required();
    verify_cmd->add_option("plan", plan_path, "Plan file")->required();
    verify_cmd->add_flag("--trace", trace, "Print the stored truth count after each item");

    auto* search_cmd = app.add_subcommand("search", "Shortest plan by exhaustive iterative deepening");
    search_cmd->add_option("problem", problem_path, "Problem file")->required();
    search_cmd->add_option("--max", max_len, "Largest length to try")->required()->check(CLI::NonNegativeNumber);
    search_cmd->add_option("--threads", threads, "Worker threads")->check(CLI::PositiveNumber);
    search_cmd->add_flag("--no-prune", no_prune, "Disable no-op pruning and memoization");
    search_cmd->add_option("--budget", budget, "Node budget (0 = unlimited)");

    auto* neg_cmd = app.add_subcommand("solve-neg", "Bounded planning with negative goals");
    neg_cmd->add_option("problem", problem_path, "Problem file")->required();
    neg_cmd->add_flag("--shortest", shortest, "Iterative deepening for a shortest plan");
    neg_cmd->add_option("--threads", threads, "Worker threads")->check(CLI::PositiveNumber);
    neg_cmd->add_option("--budget", budget, "Node budget (0 = unlimited)");
    neg_cmd->add_option("-o,--output", output, "Plan file (default: stdout)");

    auto* reduce_cmd = app.add_subcommand("reduce", "Turn a DIMACS CNF into a gossip problem");
    reduce_cmd->add_option("cnf", cnf_path, "DIMACS file")->required();
    reduce_cmd->add_option("-o,--output", output, "Problem file (default: stdout)");

    auto* stats_cmd = app.add_subcommand("stats", "Protocol lengths against their closed forms on complete graphs");
    stats_cmd->add_option("--mode", mode_text, "two-way, one-way or parallel")->required();
    stats_cmd->add_option("--n", n_text, "Agent range A..B")->required();
    stats_cmd->add_option("--d", d_text, "Depth range A..B")->required();
    stats_cmd->add_flag("--verify", verify_rows, "Also verify each plan");
    stats_cmd->add_option("-o,--output", output, "CSV file (default: stdout)");

    auto* hier_cmd = app.add_subcommand("hierarchy", "Upward-only sharing across levels with secret changes");
    hier_cmd->add_option("levels", levels, "Level of agent 1, 2, ...")->required();
    hier_cmd->add_option("--problem-out", problem_out, "Write the problem file here");
    hier_cmd->add_option("--plan-out", plan_out, "Write the plan file here");

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        app.exit(e, err, err);
        return exit_usage;
    }

    SearchOptions search_opt;
    search_opt.threads = threads;
    search_opt.node_budget = budget;

    try {
        if (*plan_cmd) {
            const ProblemInstance inst = load_problem(problem_path);
            Selection sel;
            try {
                sel = auto_select(inst);
            } catch (const std::invalid_argument& e) {
                throw UsageError(e.what());
            }
            if (!sel.plan) {
                err << "no protocol applies: " << sel.reason << "\n";
                return exit_failure;
            }
            std::string text;
            if (sel.protocol)
                text += "# " + std::string(to_string(*sel.protocol)) + " protocol, length " +
                        std::to_string(sel.plan->length()) + "\n";
            text += serialize_plan(*sel.plan);
            write_output(output, text, out);
            return exit_ok;
        }
        if (*verify_cmd) {
            const ProblemInstance inst = load_problem(problem_path);
            Plan plan;
            try {
                plan = parse_plan(slurp(plan_path), inst.mode);
            } catch (const ParseError& e) {
                throw UsageError(plan_path + ":" + e.what());
            }
            VerificationReport rep;
            try {
                rep = verify(inst, plan, trace);
            } catch (const PlanExecutionError& e) {
                out << "invalid plan: " << e.what() << "\n";
                return exit_failure;
            }
            if (rep.state_trace) {
                for (std::size_t k = 0; k < rep.state_trace->size(); ++k)
                    out << "after " << k + 1 << ": " << (*rep.state_trace)[k] << " truths\n";
            }
            if (rep.success) {
                out << "success: all " << inst.goals.size() << " goals hold\n";
                return exit_ok;
            }
            out << "failure: goal " << to_string(*rep.failing_goal) << " does not hold\n";
            return exit_failure;
        }
        if (*search_cmd) {
            const ProblemInstance inst = load_problem(problem_path);
            if (no_prune) {
                search_opt.prune_noops = false;
                search_opt.prune_detours = false;
                search_opt.memoize = false;
            }
            const SearchResult r = inst.mode == Mode::parallel ? min_parallel_steps(inst, max_len, search_opt)
                                                               : search_optimal(inst, max_len, search_opt);
            report_search(r, inst.mode, out, err);
            return r.status == SearchStatus::found ? exit_ok : exit_failure;
        }
        if (*neg_cmd) {
            const ProblemInstance inst = load_problem(problem_path);
            if (auto why = quick_infeasible(inst))
                err << "infeasible: " << *why << "\n";
            NegOptions opt;
            opt.search = search_opt;
            opt.shortest = shortest;
            const SearchResult r = solve_neg(inst, opt);
            if (inst.mode == Mode::parallel)
                err << "note: the step bound " << r.bound << " for parallel mode is a conservative choice\n";
            if (r.status == SearchStatus::found) {
                write_output(output, serialize_plan(*r.plan), out);
                return exit_ok;
            }
            if (r.status == SearchStatus::proven_absent)
                out << "no plan: proven absent within bound " << r.bound << " (" << r.nodes << " nodes)\n";
            else
                err << "node budget exhausted after " << r.nodes << " nodes\n";
            return exit_failure;
        }
        if (*reduce_cmd) {
            CnfFormula cnf;
            try {
                cnf = parse_dimacs(slurp(cnf_path));
            } catch (const ParseError& e) {
                throw UsageError(cnf_path + ":" + e.what());
            }
            const auto [inst, map] = sat_to_gossip(cnf);
            std::string text = "# source " + std::to_string(map.source) + "\n";
            for (std::size_t k = 0; k < map.variables.size(); ++k) {
                const auto& v = map.variables[k];
                text += "# x" + std::to_string(k + 1) + ": pos " + std::to_string(v.positive) + " neg " +
                        std::to_string(v.negative) + " b " + std::to_string(v.b) + " d " + std::to_string(v.d) + "\n";
            }
            for (std::size_t j = 0; j < map.clauses.size(); ++j)
                text += "# clause " + std::to_string(j + 1) + ": agent " + std::to_string(map.clauses[j]) + "\n";
            text += serialize_problem(inst);
            write_output(output, text, out);
            return exit_ok;
        }
        if (*stats_cmd) {
            const auto mode = parse_mode(mode_text);
            if (!mode)
                throw UsageError("unknown mode '" + mode_text + "'");
            const auto [n_lo, n_hi] = parse_range(n_text, "n");
            const auto [d_lo, d_hi] = parse_range(d_text, "d");
            std::vector<StatsRow> rows;
            try {
                rows = sweep_stats(*mode, n_lo, n_hi, d_lo, d_hi, verify_rows);
            } catch (const std::invalid_argument& e) {
                throw UsageError(e.what());
            }
            write_output(output, emit_stats_csv(rows), out);
            bool ok = true;
            for (const auto& r : rows) {
                if (!r.match) {
                    err << "length mismatch at n=" << r.n << " d=" << r.d << "\n";
                    ok = false;
                }
                if (r.verified && !*r.verified) {
                    err << "verification failed at n=" << r.n << " d=" << r.d << "\n";
                    ok = false;
                }
            }
            return ok ? exit_ok : exit_failure;
        }
        if (*hier_cmd) {
            std::map<AgentId, int> by_agent;
            for (std::size_t k = 0; k < levels.size(); ++k)
                by_agent[static_cast<AgentId>(k + 1)] = levels[k];
            const auto [inst, plan] = hierarchy_demo(by_agent);
            const auto rep = verify(inst, plan);
            if (!problem_out.empty())
                write_output(problem_out, serialize_problem(inst), out);
            if (!plan_out.empty())
                write_output(plan_out, serialize_plan(plan), out);
            if (problem_out.empty() && plan_out.empty())
                out << serialize_plan(plan);
            out << (rep.success ? "verified: success\n" : "verified: failure on " + to_string(*rep.failing_goal) + "\n");
            return rep.success ? exit_ok : exit_failure;
        }
    } catch (const UsageError& e) {
        err << "error: " << e.what() << "\n";
        return exit_usage;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << "\n";
        return exit_usage;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return exit_failure;
    }
    return exit_usage;
}

} // namespace epigossip
