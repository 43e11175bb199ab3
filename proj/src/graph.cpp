#include "epigossip/graph.hpp"

#include <algorithm>
#include <cstdint>
#include <deque>
#include <functional>
#include <numeric>
#include <stdexcept>
#include <string>
#include <unordered_set>

namespace epigossip {

CommGraph::CommGraph(int n, bool directed)
    : n_(n), directed_(directed), adj_(static_cast<std::size_t>(n) * static_cast<std::size_t>(n), 0) {
    if (n < 1)
        throw std::invalid_argument("graph needs at least one agent");
}

CommGraph CommGraph::complete(int n) {
    CommGraph g(n, false);
    for (AgentId u = 1; u <= n; ++u)
        for (AgentId v = u + 1; v <= n; ++v)
            g.add_edge(u, v);
    return g;
}

CommGraph CommGraph::complete_digraph(int n) {
    CommGraph g(n, true);
    for (AgentId u = 1; u <= n; ++u)
        for (AgentId v = 1; v <= n; ++v)
            if (u != v)
                g.add_edge(u, v);
    return g;
}

CommGraph CommGraph::path(int n) {
    CommGraph g(n, false);
    for (AgentId u = 1; u < n; ++u)
        g.add_edge(u, u + 1);
    return g;
}

void CommGraph::add_edge(AgentId u, AgentId v) {
    if (u < 1 || u > n_ || v < 1 || v > n_)
        throw std::out_of_range("edge " + std::to_string(u) + " " + std::to_string(v) +
                                " outside 1.." + std::to_string(n_));
    if (u == v)
        throw std::invalid_argument("self-loop on agent " + std::to_string(u));
    const auto at = [this](AgentId a, AgentId b) -> char& {
        return adj_[static_cast<std::size_t>(a - 1) * static_cast<std::size_t>(n_) +
                    static_cast<std::size_t>(b - 1)];
    };
    if (directed_) {
        edges_.emplace(u, v);
        at(u, v) = 1;
    } else {
        edges_.emplace(std::min(u, v), std::max(u, v));
        at(u, v) = 1;
        at(v, u) = 1;
    }
}

bool CommGraph::has_edge(AgentId u, AgentId v) const noexcept {
    if (u < 1 || u > n_ || v < 1 || v > n_)
        return false;
    return adj_[static_cast<std::size_t>(u - 1) * static_cast<std::size_t>(n_) +
                static_cast<std::size_t>(v - 1)] != 0;
}

std::vector<AgentId> CommGraph::neighbors(AgentId u) const {
    std::vector<AgentId> out;
    for (AgentId v = 1; v <= n_; ++v)
        if (has_edge(u, v))
            out.push_back(v);
    return out;
}

int CommGraph::degree(AgentId u) const {
    int d = 0;
    for (AgentId v = 1; v <= n_; ++v)
        d += has_edge(u, v) ? 1 : 0;
    return d;
}

std::vector<AgentId> RootedTree::children(AgentId v) const {
    std::vector<AgentId> out;
    for (AgentId u = 1; u < static_cast<AgentId>(parent.size()); ++u)
        if (parent[static_cast<std::size_t>(u)] == v && u != root)
            out.push_back(u);
    return out;
}

namespace {

void require_undirected(const CommGraph& g, const char* what) {
    if (g.directed())
        throw std::invalid_argument(std::string(what) + " requires an undirected graph");
}

void require_directed(const CommGraph& g, const char* what) {
    if (!g.directed())
        throw std::invalid_argument(std::string(what) + " requires a directed graph");
}

} // namespace

std::vector<bool> reachable_from(const CommGraph& g, AgentId source) {
    const int n = g.agent_count();
    std::vector<bool> seen(static_cast<std::size_t>(n) + 1, false);
    std::deque<AgentId> queue{source};
    seen[static_cast<std::size_t>(source)] = true;
    while (!queue.empty()) {
        const AgentId u = queue.front();
        queue.pop_front();
        for (AgentId v : g.neighbors(u)) {
            if (!seen[static_cast<std::size_t>(v)]) {
                seen[static_cast<std::size_t>(v)] = true;
                queue.push_back(v);
            }
        }
    }
    return seen;
}

bool is_connected(const CommGraph& g) {
    const auto seen = reachable_from(g, 1);
    return std::all_of(seen.begin() + 1, seen.end(), [](bool b) { return b; });
}

std::optional<RootedTree> spanning_tree(const CommGraph& g) {
    require_undirected(g, "spanning_tree");
    const int n = g.agent_count();
    if (n < 2)
        return std::nullopt;

    RootedTree tree;
    tree.root = 1;
    tree.parent.assign(static_cast<std::size_t>(n) + 1, -1);
    tree.parent[1] = 0;
    std::deque<AgentId> queue{1};
    while (!queue.empty()) {
        const AgentId u = queue.front();
        queue.pop_front();
        for (AgentId v : g.neighbors(u)) {
            if (tree.parent[static_cast<std::size_t>(v)] == -1) {
                tree.parent[static_cast<std::size_t>(v)] = u;
                queue.push_back(v);
            }
        }
    }
    for (AgentId v = 1; v <= n; ++v)
        if (tree.parent[static_cast<std::size_t>(v)] == -1)
            return std::nullopt;
    tree.parent[0] = 0;
    tree.child = g.neighbors(1).front();
    return tree;
}

std::optional<std::vector<AgentId>> hamiltonian_path(const CommGraph& g) {
    require_undirected(g, "hamiltonian_path");
    const int n = g.agent_count();
    if (n == 1)
        return std::vector<AgentId>{1};
    if (!is_connected(g))
        return std::nullopt;

    std::vector<int> deg(static_cast<std::size_t>(n) + 1, 0);
    int leaves = 0;
    for (AgentId v = 1; v <= n; ++v) {
        deg[static_cast<std::size_t>(v)] = g.degree(v);
        leaves += deg[static_cast<std::size_t>(v)] == 1 ? 1 : 0;
    }
    if (leaves > 2)
        return std::nullopt;

    const auto by_degree = [&deg](AgentId a, AgentId b) {
        return std::pair(deg[static_cast<std::size_t>(a)], a) < std::pair(deg[static_cast<std::size_t>(b)], b);
    };
    std::vector<std::vector<AgentId>> adj(static_cast<std::size_t>(n) + 1);
    for (AgentId v = 1; v <= n; ++v) {
        adj[static_cast<std::size_t>(v)] = g.neighbors(v);
        std::sort(adj[static_cast<std::size_t>(v)].begin(), adj[static_cast<std::size_t>(v)].end(), by_degree);
    }

    // Failed (visited set, endpoint) pairs; only used while the key fits.
    const bool memo_ok = n <= 57;
    std::unordered_set<std::uint64_t> dead;
    std::vector<AgentId> path;
    std::vector<bool> used(static_cast<std::size_t>(n) + 1, false);
    std::uint64_t mask = 0;

    std::function<bool(AgentId)> extend = [&](AgentId last) -> bool {
        if (static_cast<int>(path.size()) == n)
            return true;
        const std::uint64_t key = (mask << 6) | static_cast<std::uint64_t>(last);
        if (memo_ok && dead.count(key) != 0)
            return false;
        for (AgentId v : adj[static_cast<std::size_t>(last)]) {
            if (used[static_cast<std::size_t>(v)])
                continue;
            used[static_cast<std::size_t>(v)] = true;
            mask |= std::uint64_t{1} << (v - 1);
            path.push_back(v);
            if (extend(v))
                return true;
            path.pop_back();
            mask &= ~(std::uint64_t{1} << (v - 1));
            used[static_cast<std::size_t>(v)] = false;
        }
        if (memo_ok)
            dead.insert(key);
        return false;
    };

    std::vector<AgentId> starts(static_cast<std::size_t>(n));
    std::iota(starts.begin(), starts.end(), 1);
    std::sort(starts.begin(), starts.end(), by_degree);
    for (AgentId s : starts) {
        used[static_cast<std::size_t>(s)] = true;
        mask = std::uint64_t{1} << (s - 1);
        path.assign(1, s);
        if (extend(s))
            return path;
        used[static_cast<std::size_t>(s)] = false;
    }
    return std::nullopt;
}

std::optional<std::pair<AgentId, AgentId>> detect_k2_bipartite(const CommGraph& g) {
    require_undirected(g, "detect_k2_bipartite");
    const int n = g.agent_count();
    if (n < 4)
        return std::nullopt;
    for (AgentId i = 1; i <= n; ++i) {
        for (AgentId j = i + 1; j <= n; ++j) {
            bool ok = true;
            for (AgentId v = 1; v <= n && ok; ++v)
                if (v != i && v != j)
                    ok = g.has_edge(i, v) && g.has_edge(j, v);
            if (ok)
                return std::pair(i, j);
        }
    }
    return std::nullopt;
}

std::optional<Bipartition> detect_balanced_bipartite(const CommGraph& g) {
    require_undirected(g, "detect_balanced_bipartite");
    const int n = g.agent_count();
    if (n < 2)
        return std::nullopt;

    // Components of the complement graph, discovered in order of least member.
    std::vector<int> comp(static_cast<std::size_t>(n) + 1, -1);
    std::vector<std::vector<AgentId>> members;
    for (AgentId s = 1; s <= n; ++s) {
        if (comp[static_cast<std::size_t>(s)] != -1)
            continue;
        const int id = static_cast<int>(members.size());
        members.emplace_back();
        std::deque<AgentId> queue{s};
        comp[static_cast<std::size_t>(s)] = id;
        while (!queue.empty()) {
            const AgentId u = queue.front();
            queue.pop_front();
            members.back().push_back(u);
            for (AgentId v = 1; v <= n; ++v) {
                if (v != u && !g.has_edge(u, v) && comp[static_cast<std::size_t>(v)] == -1) {
                    comp[static_cast<std::size_t>(v)] = id;
                    queue.push_back(v);
                }
            }
        }
    }

    const int r = static_cast<int>(members.size());
    const int target = (n + 1) / 2;
    // feasible[k][s]: components k..r-1 can contribute exactly s more agents.
    std::vector<std::vector<char>> feasible(static_cast<std::size_t>(r) + 1,
                                            std::vector<char>(static_cast<std::size_t>(target) + 1, 0));
    feasible[static_cast<std::size_t>(r)][0] = 1;
    for (int k = r - 1; k >= 0; --k) {
        const int size = static_cast<int>(members[static_cast<std::size_t>(k)].size());
        for (int s = 0; s <= target; ++s) {
            const bool skip = feasible[static_cast<std::size_t>(k) + 1][static_cast<std::size_t>(s)] != 0;
            const bool take = s >= size &&
                              feasible[static_cast<std::size_t>(k) + 1][static_cast<std::size_t>(s - size)] != 0;
            feasible[static_cast<std::size_t>(k)][static_cast<std::size_t>(s)] = (skip || take) ? 1 : 0;
        }
    }
    if (feasible[0][static_cast<std::size_t>(target)] == 0)
        return std::nullopt;

    Bipartition out;
    int need = target;
    for (int k = 0; k < r; ++k) {
        const auto& part = members[static_cast<std::size_t>(k)];
        const int size = static_cast<int>(part.size());
        const bool take = need >= size &&
                          feasible[static_cast<std::size_t>(k) + 1][static_cast<std::size_t>(need - size)] != 0;
        auto& dest = take ? out.first : out.second;
        dest.insert(dest.end(), part.begin(), part.end());
        if (take)
            need -= size;
    }
    std::sort(out.first.begin(), out.first.end());
    std::sort(out.second.begin(), out.second.end());
    return out;
}

CommGraph mirror_graph(const CommGraph& g) {
    require_directed(g, "mirror_graph");
    CommGraph out(g.agent_count(), false);
    for (const auto& [u, v] : g.edges())
        if (u < v && g.has_edge(v, u))
            out.add_edge(u, v);
    return out;
}

bool is_strongly_connected(const CommGraph& g) {
    require_directed(g, "is_strongly_connected");
    const int n = g.agent_count();
    const auto forward = reachable_from(g, 1);
    CommGraph reversed(n, true);
    for (const auto& [u, v] : g.edges())
        reversed.add_edge(v, u);
    const auto backward = reachable_from(reversed, 1);
    for (AgentId v = 1; v <= n; ++v)
        if (!forward[static_cast<std::size_t>(v)] || !backward[static_cast<std::size_t>(v)])
            return false;
    return true;
}

} // namespace epigossip
