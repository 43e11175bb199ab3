#include "epigossip/protocols.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>
#include <string>

namespace epigossip {

std::string_view to_string(Protocol p) noexcept {
    switch (p) {
    case Protocol::spanning_tree:
        return "spanning-tree";
    case Protocol::hamiltonian:
        return "hamiltonian";
    case Protocol::bipartite:
        return "bipartite";
    case Protocol::directional:
        return "directional";
    case Protocol::parallel:
        return "parallel";
    }
    return "?";
}

int ceil_log2(int n) noexcept {
    int k = 0;
    while ((1LL << k) < n)
        ++k;
    return k;
}

long long protocol_length(Protocol p, int n, int d) {
    const long long nn = n;
    const long long dd = d;
    switch (p) {
    case Protocol::spanning_tree:
        return dd * (2 * nn - 3);
    case Protocol::hamiltonian:
        return 1 + (dd + 1) * (nn - 2);
    case Protocol::bipartite:
        return (dd + 1) * (nn - 2);
    case Protocol::directional:
        return (dd + 1) * (nn - 1);
    case Protocol::parallel:
        return n % 2 == 0 ? dd * (ceil_log2(n) - 1) + 1 : dd * ceil_log2(n) + 1;
    }
    throw std::invalid_argument("unknown protocol");
}

namespace {

void require_depth(int d) {
    if (d < 1)
        throw std::invalid_argument("depth d must be >= 1");
}

// Checks that `order` lists every agent of g exactly once.
void require_permutation(const CommGraph& g, std::span<const AgentId> order, const char* what) {
    const int n = g.agent_count();
    if (static_cast<int>(order.size()) != n)
        throw std::invalid_argument(std::string(what) + ": expected " + std::to_string(n) + " agents, got " +
                                    std::to_string(order.size()));
    std::vector<bool> seen(static_cast<std::size_t>(n) + 1, false);
    for (AgentId a : order) {
        if (a < 1 || a > n || seen[static_cast<std::size_t>(a)])
            throw std::invalid_argument(std::string(what) + ": not a permutation of the agents");
        seen[static_cast<std::size_t>(a)] = true;
    }
}

void emit(Plan& plan, AgentId a, AgentId b) {
    plan.items.emplace_back(TwoWayCall{a, b});
}

} // namespace

BipartiteSplit make_bipartite_split(int n, std::pair<AgentId, AgentId> hubs) {
    if (n < 4)
        throw std::invalid_argument("bipartite split needs n >= 4");
    BipartiteSplit s{hubs.first, hubs.second, {}, {}};
    std::vector<AgentId> rest;
    for (AgentId v = 1; v <= n; ++v)
        if (v != hubs.first && v != hubs.second)
            rest.push_back(v);
    const auto half = (rest.size() + 1) / 2;
    s.left.assign(rest.begin(), rest.begin() + static_cast<std::ptrdiff_t>(half));
    s.right.assign(rest.begin() + static_cast<std::ptrdiff_t>(half), rest.end());
    return s;
}

Plan spanning_tree_protocol(const CommGraph& g, const RootedTree& tree, int d) {
    require_depth(d);
    const int n = g.agent_count();
    if (g.directed())
        throw std::invalid_argument("spanning_tree_protocol: graph must be undirected");
    if (n < 2 || tree.agent_count() != n)
        throw std::invalid_argument("spanning_tree_protocol: tree does not cover the graph");
    if (tree.root < 1 || tree.root > n || tree.parent[static_cast<std::size_t>(tree.root)] != 0)
        throw std::invalid_argument("spanning_tree_protocol: malformed root");
    if (tree.child < 1 || tree.child > n || tree.parent[static_cast<std::size_t>(tree.child)] != tree.root)
        throw std::invalid_argument("spanning_tree_protocol: designated child is not a child of the root");
    for (AgentId v = 1; v <= n; ++v) {
        if (v == tree.root)
            continue;
        // Every vertex must reach the root along tree edges that exist in g.
        AgentId u = v;
        for (int steps = 0; u != tree.root; ++steps) {
            const AgentId p = tree.parent[static_cast<std::size_t>(u)];
            if (steps >= n || p < 1 || p > n || !g.has_edge(u, p))
                throw std::invalid_argument("spanning_tree_protocol: malformed tree at agent " + std::to_string(v));
            u = p;
        }
    }

    std::vector<std::vector<AgentId>> kids(static_cast<std::size_t>(n) + 1);
    for (AgentId v = 1; v <= n; ++v)
        if (v != tree.root)
            kids[static_cast<std::size_t>(tree.parent[static_cast<std::size_t>(v)])].push_back(v);

    Plan plan;
    plan.mode = Mode::two_way;

    // Leaves first: each vertex calls its parent once its own subtree is done.
    const auto upward = [&](auto&& self, AgentId v) -> void {
        for (AgentId c : kids[static_cast<std::size_t>(v)]) {
            if (v == tree.root && c == tree.child)
                continue;
            self(self, c);
            emit(plan, c, v);
        }
    };
    const auto downward = [&](auto&& self, AgentId v) -> void {
        for (AgentId c : kids[static_cast<std::size_t>(v)]) {
            if (v == tree.root && c == tree.child)
                continue;
            emit(plan, v, c);
            self(self, c);
        }
    };

    for (int pass = 1; pass <= 2 * d; ++pass) {
        if (pass % 2 == 1) {
            upward(upward, tree.root);
            upward(upward, tree.child);
            emit(plan, tree.root, tree.child);
        } else {
            downward(downward, tree.root);
            downward(downward, tree.child);
        }
    }
    return plan;
}

Plan hamiltonian_protocol(const CommGraph& g, std::span<const AgentId> path, int d) {
    require_depth(d);
    if (g.directed())
        throw std::invalid_argument("hamiltonian_protocol: graph must be undirected");
    require_permutation(g, path, "hamiltonian_protocol");
    const int n = g.agent_count();
    if (n < 2)
        throw std::invalid_argument("hamiltonian_protocol: needs n >= 2");
    for (std::size_t k = 0; k + 1 < path.size(); ++k)
        if (!g.has_edge(path[k], path[k + 1]))
            throw std::invalid_argument("hamiltonian_protocol: " + std::to_string(path[k]) + " and " +
                                        std::to_string(path[k + 1]) + " are not adjacent");

    Plan plan;
    plan.mode = Mode::two_way;
    plan.labels.assign(path.begin(), path.end());
    // Position k (1-based) on the path.
    const auto call = [&](int k) { emit(plan, path[static_cast<std::size_t>(k - 1)], path[static_cast<std::size_t>(k)]); };

    for (int k = n - 1; k >= 1; --k)
        call(k);
    for (int k = 2; k <= n - 1; ++k)
        call(k);
    for (int pass = 2; pass <= d; ++pass) {
        if (pass % 2 == 0)
            for (int k = n - 2; k >= 1; --k)
                call(k);
        else
            for (int k = 2; k <= n - 1; ++k)
                call(k);
    }
    return plan;
}

Plan bipartite_protocol(const CommGraph& g, const BipartiteSplit& s, int d) {
    require_depth(d);
    if (g.directed())
        throw std::invalid_argument("bipartite_protocol: graph must be undirected");
    const int n = g.agent_count();
    if (n < 4)
        throw std::invalid_argument("bipartite_protocol: needs n >= 4");
    if (s.left.empty() || s.right.empty())
        throw std::invalid_argument("bipartite_protocol: both fans must be nonempty");

    std::vector<AgentId> all{s.hub1, s.hub2};
    all.insert(all.end(), s.left.begin(), s.left.end());
    all.insert(all.end(), s.right.begin(), s.right.end());
    require_permutation(g, all, "bipartite_protocol");
    for (AgentId hub : {s.hub1, s.hub2})
        for (std::size_t k = 2; k < all.size(); ++k)
            if (!g.has_edge(hub, all[k]))
                throw std::invalid_argument("bipartite_protocol: hub " + std::to_string(hub) +
                                            " is not adjacent to " + std::to_string(all[k]));

    std::vector<AgentId> left = s.left;
    std::vector<AgentId> right = s.right;
    std::sort(left.begin(), left.end());
    std::sort(right.begin(), right.end());

    Plan plan;
    plan.mode = Mode::two_way;
    plan.labels = all;
    for (int pass = 1; pass <= d + 1; ++pass) {
        if (pass % 2 == 1) {
            for (AgentId x : left)
                emit(plan, s.hub1, x);
            for (AgentId y : right)
                emit(plan, s.hub2, y);
        } else {
            for (auto it = right.rbegin(); it != right.rend(); ++it)
                emit(plan, s.hub1, *it);
            for (auto it = left.rbegin(); it != left.rend(); ++it)
                emit(plan, s.hub2, *it);
        }
    }
    return plan;
}

Plan directional_protocol(const CommGraph& g, std::span<const AgentId> path, int d) {
    require_depth(d);
    if (!g.directed())
        throw std::invalid_argument("directional_protocol: graph must be directed");
    require_permutation(g, path, "directional_protocol");
    const int n = g.agent_count();
    if (n < 2)
        throw std::invalid_argument("directional_protocol: needs n >= 2");
    for (std::size_t k = 0; k + 1 < path.size(); ++k)
        if (!g.has_edge(path[k], path[k + 1]) || !g.has_edge(path[k + 1], path[k]))
            throw std::invalid_argument("directional_protocol: " + std::to_string(path[k]) + " and " +
                                        std::to_string(path[k + 1]) + " are not linked both ways");

    Plan plan;
    plan.mode = Mode::one_way;
    plan.labels.assign(path.begin(), path.end());
    for (int pass = 1; pass <= d + 1; ++pass) {
        if (pass % 2 == 1)
            for (std::size_t k = 0; k + 1 < path.size(); ++k)
                plan.items.emplace_back(OneWayCall{path[k], path[k + 1]});
        else
            for (std::size_t k = path.size() - 1; k >= 1; --k)
                plan.items.emplace_back(OneWayCall{path[k], path[k - 1]});
    }
    return plan;
}

Plan parallel_protocol(const CommGraph& g, const Bipartition& parts, int d) {
    require_depth(d);
    if (g.directed())
        throw std::invalid_argument("parallel_protocol: graph must be undirected");
    const int n = g.agent_count();
    if (n < 2)
        throw std::invalid_argument("parallel_protocol: needs n >= 2");
    if (static_cast<int>(parts.first.size()) != (n + 1) / 2 || static_cast<int>(parts.second.size()) != n / 2)
        throw std::invalid_argument("parallel_protocol: parts must have sizes ceil(n/2) and floor(n/2)");
    std::vector<AgentId> all = parts.first;
    all.insert(all.end(), parts.second.begin(), parts.second.end());
    require_permutation(g, all, "parallel_protocol");
    for (AgentId u : parts.first)
        for (AgentId v : parts.second)
            if (!g.has_edge(u, v))
                throw std::invalid_argument("parallel_protocol: missing cross edge " + std::to_string(u) + " " +
                                            std::to_string(v));

    // Renumber: odd labels for the first part, even labels for the second.
    std::vector<AgentId> first = parts.first;
    std::vector<AgentId> second = parts.second;
    std::sort(first.begin(), first.end());
    std::sort(second.begin(), second.end());
    std::vector<AgentId> agent_of(static_cast<std::size_t>(n) + 1, 0);
    for (std::size_t k = 0; k < first.size(); ++k)
        agent_of[2 * k + 1] = first[k];
    for (std::size_t k = 0; k < second.size(); ++k)
        agent_of[2 * k + 2] = second[k];

    Plan plan;
    plan.mode = Mode::parallel;
    plan.labels.assign(agent_of.begin() + 1, agent_of.end());

    // Doubling rounds over labels 1..m: at round s, 2i+1 calls 2i+2^s (mod m).
    // `role[e]` is the label currently acting as even label e.
    const auto doubling_step = [&](int m, int s, const std::vector<int>& role) {
        ParallelStep step;
        for (int i = 0; i < m / 2; ++i) {
            const int odd = 2 * i + 1;
            const int even = ((2 * i + (1 << s)) - 1) % m + 1;
            step.calls.push_back(TwoWayCall{agent_of[static_cast<std::size_t>(odd)],
                                            agent_of[static_cast<std::size_t>(role[static_cast<std::size_t>(even)])]});
        }
        plan.items.emplace_back(std::move(step));
    };

    if (n % 2 == 0) {
        const int rounds = ceil_log2(n);
        std::vector<int> role(static_cast<std::size_t>(n) + 1);
        for (int e = 0; e <= n; ++e)
            role[static_cast<std::size_t>(e)] = e;
        for (int pass = 1; pass <= d; ++pass) {
            if (pass > 1) {
                // The partner from the last round takes over as 2i+2.
                std::vector<int> next = role;
                for (int i = 0; i < n / 2; ++i) {
                    const int last = ((2 * i + (1 << rounds)) - 1) % n + 1;
                    next[static_cast<std::size_t>(2 * i + 2)] = role[static_cast<std::size_t>(last)];
                }
                role = std::move(next);
            }
            for (int s = pass == 1 ? 1 : 2; s <= rounds; ++s)
                doubling_step(n, s, role);
        }
        return plan;
    }

    // Odd n: labels 1..m form the doubling core (m the largest power of two
    // below n); every later label is paired with the least unused core label
    // of opposite parity.
    int m = 1;
    while (m * 2 <= n)
        m *= 2;
    const int rounds = ceil_log2(m);
    ParallelStep pairing;
    std::vector<bool> taken(static_cast<std::size_t>(m) + 1, false);
    for (int v = m + 1; v <= n; ++v) {
        int partner = 0;
        for (int c = 1; c <= m && partner == 0; ++c)
            if (!taken[static_cast<std::size_t>(c)] && (c % 2) != (v % 2))
                partner = c;
        taken[static_cast<std::size_t>(partner)] = true;
        pairing.calls.push_back(TwoWayCall{agent_of[static_cast<std::size_t>(v)],
                                           agent_of[static_cast<std::size_t>(partner)]});
    }
    std::vector<int> identity(static_cast<std::size_t>(m) + 1);
    for (int e = 0; e <= m; ++e)
        identity[static_cast<std::size_t>(e)] = e;

    plan.items.emplace_back(pairing);
    for (int pass = 1; pass <= d; ++pass) {
        for (int s = 1; s <= rounds; ++s)
            doubling_step(m, s, identity);
        plan.items.emplace_back(pairing);
    }
    return plan;
}

namespace {

bool goals_are_full_gossip(const ProblemInstance& inst, int d) {
    std::vector<SignedGoal> want = goal_T(inst.agent_count(), d + 1);
    std::vector<SignedGoal> have = inst.goals;
    std::sort(want.begin(), want.end());
    std::sort(have.begin(), have.end());
    have.erase(std::unique(have.begin(), have.end()), have.end());
    // Self-evident positive goals are vacuous.
    std::erase_if(have, [](const SignedGoal& g) { return g.positive && is_self_evident(g.fluent); });
    return want == have;
}

} // namespace

Selection auto_select(const ProblemInstance& inst) {
    inst.validate();
    const int n = inst.agent_count();
    const int d = inst.max_goal_depth();
    Selection out;
    if (d == 0 || n == 1) {
        out.plan = Plan{inst.mode, {}, {}};
        return out;
    }
    if (!goals_are_full_gossip(inst, d))
        throw std::invalid_argument("auto_select: goals must be every depth-" + std::to_string(d) + " fluent");

    const auto& g = inst.graph;
    switch (inst.mode) {
    case Mode::two_way:
        if (auto hubs = detect_k2_bipartite(g)) {
            out.plan = bipartite_protocol(g, make_bipartite_split(n, *hubs), d);
            out.protocol = Protocol::bipartite;
        } else if (auto path = hamiltonian_path(g)) {
            out.plan = hamiltonian_protocol(g, *path, d);
            out.protocol = Protocol::hamiltonian;
        } else if (auto tree = spanning_tree(g)) {
            out.plan = spanning_tree_protocol(g, *tree, d);
            out.protocol = Protocol::spanning_tree;
        } else {
            out.reason = "communication graph is disconnected";
        }
        break;
    case Mode::one_way:
        if (auto path = hamiltonian_path(mirror_graph(g))) {
            out.plan = directional_protocol(g, *path, d);
            out.protocol = Protocol::directional;
        } else {
            out.reason = "mirror graph (mutually linked pairs) has no Hamiltonian path";
        }
        break;
    case Mode::parallel:
        if (auto parts = detect_balanced_bipartite(g)) {
            out.plan = parallel_protocol(g, *parts, d);
            out.protocol = Protocol::parallel;
        } else {
            out.reason = "graph has no complete bipartite subgraph with parts ceil(n/2), floor(n/2)";
        }
        break;
    }
    return out;
}

} // namespace epigossip
