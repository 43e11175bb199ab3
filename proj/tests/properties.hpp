#pragma once

// Randomized invariants of the knowledge-state operations. Each check runs
// `cases` trials and returns the number of failing ones, so the same code
// backs the unit tests and the acceptance report.

#include "epigossip/action.hpp"
#include "epigossip/fluent.hpp"
#include "epigossip/knowledge_state.hpp"

#include <algorithm>
#include <random>
#include <vector>

namespace props {

using namespace epigossip;

inline int pick(std::mt19937_64& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }

inline std::pair<AgentId, AgentId> random_pair(std::mt19937_64& rng, int n) {
    const AgentId i = pick(rng, 1, n);
    AgentId j = pick(rng, 1, n - 1);
    if (j >= i)
        ++j;
    return {i, j};
}

// A canonical, non-self-evident fluent of the given depth.
inline Fluent random_fluent(std::mt19937_64& rng, int n, int depth) {
    std::vector<AgentId> seq{pick(rng, 1, n)};
    while (static_cast<int>(seq.size()) <= depth) {
        AgentId next = pick(rng, 1, n - 1);
        if (next >= seq.back())
            ++next;
        seq.push_back(next);
    }
    Fluent f;
    f.secret = seq.back();
    seq.pop_back();
    f.knowers = seq;
    return f;
}

inline ParallelStep random_matching(std::mt19937_64& rng, int n) {
    std::vector<AgentId> agents(static_cast<std::size_t>(n));
    for (int a = 0; a < n; ++a)
        agents[static_cast<std::size_t>(a)] = a + 1;
    std::shuffle(agents.begin(), agents.end(), rng);
    ParallelStep step;
    const int pairs = pick(rng, 0, n / 2);
    for (int k = 0; k < pairs; ++k)
        step.calls.push_back({agents[static_cast<std::size_t>(2 * k)], agents[static_cast<std::size_t>(2 * k + 1)]});
    return step;
}

inline PlanItem random_action(std::mt19937_64& rng, int n, bool with_change) {
    const int kind = pick(rng, 0, with_change ? 3 : 2);
    const auto [i, j] = random_pair(rng, n);
    switch (kind) {
    case 0:
        return TwoWayCall{i, j};
    case 1:
        return OneWayCall{i, j};
    case 2:
        return random_matching(rng, n);
    default:
        return Change{i};
    }
}

inline std::vector<PlanItem> random_plan(std::mt19937_64& rng, int n, int max_len, bool with_change) {
    std::vector<PlanItem> out(static_cast<std::size_t>(pick(rng, 0, max_len)));
    for (auto& item : out)
        item = random_action(rng, n, with_change);
    return out;
}

inline KnowledgeState run(int n, int cap, const std::vector<PlanItem>& plan) {
    KnowledgeState st = initial_state(n, cap);
    for (const auto& item : plan)
        st = apply_item(st, item);
    return st;
}

// Half reachable states, half random fluent sets. A random set is closed
// under factivity (K_a f true makes f true) as every knowledge state is;
// without that, calls can reveal facts that were never true.
inline KnowledgeState random_state(std::mt19937_64& rng, int n, int cap) {
    if (pick(rng, 0, 1) == 0)
        return run(n, cap, random_plan(rng, n, 8, true));
    KnowledgeState st = initial_state(n, cap);
    const int count = pick(rng, 0, 12);
    for (int k = 0; k < count; ++k) {
        Fluent f = random_fluent(rng, n, pick(rng, 1, cap));
        for (; f.depth() > 0; f.knowers.erase(f.knowers.begin()))
            st.insert(f);
    }
    return st;
}

struct Shape {
    int n;
    int cap;
};

inline Shape random_shape(std::mt19937_64& rng) {
    const int n = pick(rng, 2, 6);
    return {n, pick(rng, 1, n <= 4 ? 4 : 3)};
}

// Non-change actions only add truths.
inline int check_monotonicity(std::mt19937_64& rng, int cases) {
    int failures = 0;
    for (int c = 0; c < cases; ++c) {
        const auto [n, cap] = random_shape(rng);
        const KnowledgeState st = random_state(rng, n, cap);
        const PlanItem item = random_action(rng, n, false);
        if (!apply_item(st, item).includes(st))
            ++failures;
    }
    return failures;
}

inline int check_two_way_symmetry(std::mt19937_64& rng, int cases) {
    int failures = 0;
    for (int c = 0; c < cases; ++c) {
        const auto [n, cap] = random_shape(rng);
        const KnowledgeState st = random_state(rng, n, cap);
        const auto [i, j] = random_pair(rng, n);
        const KnowledgeState once = apply_two_way(st, i, j);
        if (!(once == apply_two_way(st, j, i)) || !(apply_two_way(once, i, j) == once))
            ++failures;
    }
    return failures;
}

inline int check_parallel_order(std::mt19937_64& rng, int cases) {
    int failures = 0;
    for (int c = 0; c < cases; ++c) {
        const auto [n, cap] = random_shape(rng);
        const KnowledgeState st = random_state(rng, n, cap);
        ParallelStep step = random_matching(rng, n);
        const KnowledgeState expected = apply_parallel_step(st, step);
        std::shuffle(step.calls.begin(), step.calls.end(), rng);
        KnowledgeState seq = st;
        for (const auto& call : step.calls)
            seq = pick(rng, 0, 1) ? apply_two_way(seq, call.i, call.j) : apply_two_way(seq, call.j, call.i);
        if (!(seq == expected))
            ++failures;
    }
    return failures;
}

// Running at a higher cap and truncating equals running at the lower cap.
inline int check_depth_coherence(std::mt19937_64& rng, int cases) {
    int failures = 0;
    for (int c = 0; c < cases; ++c) {
        const int n = pick(rng, 2, 5);
        const int hi = pick(rng, 2, n <= 4 ? 4 : 3);
        const int lo = pick(rng, 1, hi - 1);
        const auto plan = random_plan(rng, n, 10, true);
        if (!(run(n, hi, plan).truncated(lo) == run(n, lo, plan)))
            ++failures;
    }
    return failures;
}

inline bool closed(const KnowledgeState& st) {
    for (const auto& f : st.truths()) {
        if (f.depth() == 0 || static_cast<int>(f.depth()) > st.depth_cap())
            return false;
        if (!is_canonical(f) || is_self_evident(f))
            return false;
        if (!st.is_true(f))
            return false;
    }
    return st.truths().size() == st.truth_count();
}

// Every stored fluent is canonical and not self-evident after any action.
inline int check_canonical_closure(std::mt19937_64& rng, int cases) {
    int failures = 0;
    for (int c = 0; c < cases; ++c) {
        const auto [n, cap] = random_shape(rng);
        KnowledgeState st = random_state(rng, n, cap);
        bool ok = closed(st);
        for (const auto& item : random_plan(rng, n, 4, true)) {
            st = apply_item(st, item);
            ok = ok && closed(st);
        }
        if (!ok)
            ++failures;
    }
    return failures;
}

} // namespace props
