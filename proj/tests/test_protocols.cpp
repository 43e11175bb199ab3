#include "doctest.h"

#include "epigossip/graph.hpp"
#include "epigossip/instance.hpp"
#include "epigossip/planner.hpp"
#include "epigossip/protocols.hpp"

#include <algorithm>
#include <numeric>
#include <random>
#include <set>

using namespace epigossip;

namespace {

ProblemInstance instance_for(const CommGraph& g, Mode mode, int d) {
    ProblemInstance inst;
    inst.graph = g;
    inst.mode = mode;
    inst.goals = goal_T(g.agent_count(), d + 1);
    inst.depth_cap = d + 1;
    return inst;
}

std::vector<AgentId> identity(int n) {
    std::vector<AgentId> v(static_cast<std::size_t>(n));
    std::iota(v.begin(), v.end(), 1);
    return v;
}

Plan bipartite_on_complete(int n, int d) {
    return bipartite_protocol(CommGraph::complete(n), make_bipartite_split(n, {1, 2}), d);
}

Plan parallel_on_complete(int n, int d) {
    const CommGraph g = CommGraph::complete(n);
    return parallel_protocol(g, *detect_balanced_bipartite(g), d);
}

} // namespace

TEST_CASE("formulas") {
    CHECK(ceil_log2(1) == 0);
    CHECK(ceil_log2(2) == 1);
    CHECK(ceil_log2(7) == 3);
    CHECK(ceil_log2(8) == 3);
    CHECK(ceil_log2(9) == 4);
    CHECK(protocol_length(Protocol::spanning_tree, 5, 1) == 7);
    CHECK(protocol_length(Protocol::hamiltonian, 5, 2) == 10);
    CHECK(protocol_length(Protocol::bipartite, 6, 2) == 12);
    CHECK(protocol_length(Protocol::directional, 4, 1) == 6);
    CHECK(protocol_length(Protocol::parallel, 8, 2) == 5);
    CHECK(protocol_length(Protocol::parallel, 13, 1) == 5);
    for (int d = 1; d <= 6; ++d) {
        CHECK(protocol_length(Protocol::parallel, 8, d) == 2 * d + 1);
        CHECK(protocol_length(Protocol::parallel, 7, d) == 3 * d + 1);
    }
}

TEST_CASE("spanning tree protocol examples") {
    const CommGraph k5 = CommGraph::complete(5);
    CHECK(spanning_tree_protocol(k5, *spanning_tree(k5), 1).length() == 7);
    const CommGraph k6 = CommGraph::complete(6);
    CHECK(spanning_tree_protocol(k6, *spanning_tree(k6), 2).length() == 18);

    const CommGraph k2g = CommGraph::complete(2);
    const Plan p = spanning_tree_protocol(k2g, *spanning_tree(k2g), 3);
    CHECK(p.length() == 3);
    CHECK(verify(instance_for(k2g, Mode::two_way, 3), p).success);

    // A tree that is not a path.
    CommGraph star(5, false);
    for (AgentId v = 2; v <= 5; ++v)
        star.add_edge(1, v);
    for (int d = 1; d <= 3; ++d) {
        const Plan s = spanning_tree_protocol(star, *spanning_tree(star), d);
        CHECK(s.length() == static_cast<std::size_t>(d * 7));
        CHECK(verify(instance_for(star, Mode::two_way, d), s).success);
    }
}

TEST_CASE("hamiltonian protocol examples") {
    const CommGraph p5 = CommGraph::path(5);
    CHECK(hamiltonian_protocol(p5, identity(5), 1).length() == 7);
    CHECK(hamiltonian_protocol(p5, identity(5), 2).length() == 10);
    CHECK(hamiltonian_protocol(CommGraph::path(3), identity(3), 1).length() == 3);
    CHECK_THROWS(hamiltonian_protocol(p5, std::vector<AgentId>{1, 3, 2, 4, 5}, 1));
    CHECK(verify(instance_for(p5, Mode::two_way, 2), hamiltonian_protocol(p5, identity(5), 2)).success);
}

TEST_CASE("bipartite protocol examples") {
    CHECK(bipartite_on_complete(6, 1).length() == 8);
    CHECK(bipartite_on_complete(6, 2).length() == 12);
    CHECK(bipartite_on_complete(4, 1).length() == 4);
    CHECK(verify(instance_for(CommGraph::complete(6), Mode::two_way, 2), bipartite_on_complete(6, 2)).success);
    CHECK_THROWS(bipartite_protocol(CommGraph::path(6), make_bipartite_split(6, {1, 2}), 1));
    BipartiteSplit empty_fan = make_bipartite_split(4, {1, 2});
    empty_fan.right.insert(empty_fan.right.end(), empty_fan.left.begin(), empty_fan.left.end());
    empty_fan.left.clear();
    CHECK_THROWS(bipartite_protocol(CommGraph::complete(4), empty_fan, 1));
}

TEST_CASE("directional protocol examples") {
    CHECK(directional_protocol(CommGraph::complete_digraph(4), identity(4), 1).length() == 6);
    CHECK(directional_protocol(CommGraph::complete_digraph(3), identity(3), 2).length() == 6);
    const Plan p2 = directional_protocol(CommGraph::complete_digraph(2), identity(2), 1);
    REQUIRE(p2.length() == 2);
    CHECK(p2.items[0] == PlanItem{OneWayCall{1, 2}});
    CHECK(p2.items[1] == PlanItem{OneWayCall{2, 1}});
    CHECK_THROWS(directional_protocol(CommGraph::complete(3), identity(3), 1));
}

TEST_CASE("directional passes leave an end agent knowing T_r") {
    // After pass r the last agent of the path (r odd) or the first (r even)
    // knows every depth r-1 fluent.
    for (int n = 2; n <= 6; ++n)
        for (int d = 1; d <= 3; ++d) {
            if (n >= 6 && d >= 3)
                continue;
            const CommGraph g = CommGraph::complete_digraph(n);
            std::vector<AgentId> path = identity(n);
            std::reverse(path.begin(), path.end());
            const Plan plan = directional_protocol(g, path, d);
            KnowledgeState st = initial_state(n, d + 1);
            for (int r = 1; r <= d + 1; ++r) {
                for (int k = 0; k < n - 1; ++k)
                    st = apply_item(st, plan.items[static_cast<std::size_t>((r - 1) * (n - 1) + k)]);
                const AgentId end = r % 2 == 1 ? path.back() : path.front();
                if (r == 1) {
                    for (AgentId j = 1; j <= n; ++j)
                        CHECK(st.knows(end, secret_of(j)));
                    continue;
                }
                for (const auto& g2 : goal_T(n, r))
                    CHECK(st.knows(end, g2.fluent));
            }
        }
}

TEST_CASE("parallel protocol examples") {
    CHECK(parallel_on_complete(8, 1).length() == 3);
    CHECK(parallel_on_complete(8, 2).length() == 5);
    CHECK(parallel_on_complete(13, 1).length() == 5);
    CHECK(parallel_on_complete(2, 1).length() == 1);
    for (int n : {5, 8, 13}) {
        const Plan p = parallel_on_complete(n, 1);
        CHECK(verify(instance_for(CommGraph::complete(n), Mode::parallel, 1), p).success);
        for (const auto& item : p.items) {
            std::set<AgentId> seen;
            for (const auto& c : std::get<ParallelStep>(item).calls) {
                CHECK(seen.insert(c.i).second);
                CHECK(seen.insert(c.j).second);
            }
        }
    }
    CHECK_THROWS(parallel_protocol(CommGraph::complete(4), Bipartition{{1, 2}, {3}}, 1));
}

TEST_CASE("generated lengths match the formulas") {
    for (int n = 2; n <= 12; ++n)
        for (int d = 1; d <= 4; ++d) {
            const CommGraph g = CommGraph::complete(n);
            const auto len = [](const Plan& p) { return static_cast<long long>(p.length()); };
            CHECK(len(spanning_tree_protocol(g, *spanning_tree(g), d)) == protocol_length(Protocol::spanning_tree, n, d));
            CHECK(len(hamiltonian_protocol(g, identity(n), d)) == protocol_length(Protocol::hamiltonian, n, d));
            CHECK(len(directional_protocol(CommGraph::complete_digraph(n), identity(n), d)) ==
                  protocol_length(Protocol::directional, n, d));
            CHECK(len(parallel_on_complete(n, d)) == protocol_length(Protocol::parallel, n, d));
            if (n >= 4)
                CHECK(len(bipartite_on_complete(n, d)) == protocol_length(Protocol::bipartite, n, d));
        }
}

TEST_CASE("generated plans reach every goal") {
    for (int n = 2; n <= 7; ++n)
        for (int d = 1; d <= 3; ++d) {
            const CommGraph g = CommGraph::complete(n);
            const auto two = instance_for(g, Mode::two_way, d);
            CHECK(verify(two, spanning_tree_protocol(g, *spanning_tree(g), d)).success);
            CHECK(verify(two, hamiltonian_protocol(g, identity(n), d)).success);
            if (n >= 4)
                CHECK(verify(two, bipartite_on_complete(n, d)).success);
            CHECK(verify(instance_for(CommGraph::complete_digraph(n), Mode::one_way, d),
                         directional_protocol(CommGraph::complete_digraph(n), identity(n), d))
                      .success);
            CHECK(verify(instance_for(g, Mode::parallel, d), parallel_on_complete(n, d)).success);
        }
}

TEST_CASE("plans on sparser graphs") {
    std::mt19937_64 rng(9);
    for (int trial = 0; trial < 60; ++trial) {
        const int n = std::uniform_int_distribution<int>(2, 7)(rng);
        const int d = std::uniform_int_distribution<int>(1, 2)(rng);
        CommGraph g(n, false);
        std::bernoulli_distribution coin(0.5);
        for (AgentId u = 1; u <= n; ++u)
            for (AgentId v = u + 1; v <= n; ++v)
                if (coin(rng))
                    g.add_edge(u, v);
        const auto sel = auto_select(instance_for(g, Mode::two_way, d));
        CHECK(sel.plan.has_value() == is_connected(g));
        if (sel.plan) {
            CHECK(verify(instance_for(g, Mode::two_way, d), *sel.plan).success);
            CHECK(static_cast<long long>(sel.plan->length()) == protocol_length(*sel.protocol, n, d));
        }
    }
}

TEST_CASE("auto_select") {
    const auto k6 = auto_select(instance_for(CommGraph::complete(6), Mode::two_way, 2));
    REQUIRE(k6.plan);
    CHECK(k6.protocol == Protocol::bipartite);
    CHECK(k6.plan->length() == 12);

    const auto p5 = auto_select(instance_for(CommGraph::path(5), Mode::two_way, 1));
    REQUIRE(p5.plan);
    CHECK(p5.protocol == Protocol::hamiltonian);
    CHECK(p5.plan->length() == 7);

    const auto split = auto_select(instance_for(CommGraph(4, false), Mode::two_way, 1));
    CHECK_FALSE(split.plan);
    CHECK_FALSE(split.reason.empty());

    const auto dir = auto_select(instance_for(CommGraph::complete_digraph(4), Mode::one_way, 1));
    CHECK(dir.protocol == Protocol::directional);
    const auto par = auto_select(instance_for(CommGraph::complete(13), Mode::parallel, 1));
    CHECK(par.protocol == Protocol::parallel);
    CHECK(par.plan->length() == 5);

    ProblemInstance partial = instance_for(CommGraph::complete(4), Mode::two_way, 1);
    partial.goals.pop_back();
    CHECK_THROWS_AS(auto_select(partial), std::invalid_argument);
}
