#pragma once

#include "epigossip/fluent.hpp"

#include <optional>
#include <set>
#include <utility>
#include <vector>

namespace epigossip {

/// Communication topology over agents 1..n. Undirected edges are stored once
/// as (min, max); directed edges as (from, to).
class CommGraph {
public:
    CommGraph() = default;
    CommGraph(int n, bool directed);

    static CommGraph complete(int n);
    static CommGraph complete_digraph(int n);
    /// 1-2-...-n.
    static CommGraph path(int n);

    int agent_count() const noexcept { return n_; }
    bool directed() const noexcept { return directed_; }

    /// Rejects self-loops and out-of-range endpoints; duplicates are ignored.
    void add_edge(AgentId u, AgentId v);
    /// For directed graphs: an arc u -> v.
    bool has_edge(AgentId u, AgentId v) const noexcept;

    const std::set<std::pair<AgentId, AgentId>>& edges() const noexcept { return edges_; }
    std::size_t edge_count() const noexcept { return edges_.size(); }

    /// Out-neighbours (all neighbours when undirected), ascending.
    std::vector<AgentId> neighbors(AgentId u) const;
    int degree(AgentId u) const;

    bool operator==(const CommGraph& other) const {
        return n_ == other.n_ && directed_ == other.directed_ && edges_ == other.edges_;
    }

private:
    int n_ = 0;
    bool directed_ = false;
    std::set<std::pair<AgentId, AgentId>> edges_;
    std::vector<char> adj_;
};

/// Spanning tree rooted at agent 1; `child` is the root's child whose
/// subtree plays the role of T_2 in the tree protocol.
struct RootedTree {
    AgentId root = 1;
    AgentId child = 0;
    /// parent[v] for v in 1..n (index 0 unused); parent[root] == 0.
    std::vector<AgentId> parent;

    int agent_count() const noexcept { return parent.empty() ? 0 : static_cast<int>(parent.size()) - 1; }
    std::vector<AgentId> children(AgentId v) const;
};

/// Breadth-first tree from agent 1 with ascending neighbour order, or nothing
/// when the graph is disconnected (or has fewer than 2 agents). Throws on
/// directed input.
std::optional<RootedTree> spanning_tree(const CommGraph& g);

bool is_connected(const CommGraph& g);

/// Exact backtracking; intended for n up to about 20.
std::optional<std::vector<AgentId>> hamiltonian_path(const CommGraph& g);

/// Least pair {i, j} (i < j) adjacent to every other agent, if any.
std::optional<std::pair<AgentId, AgentId>> detect_k2_bipartite(const CommGraph& g);

struct Bipartition {
    std::vector<AgentId> first;  // ceil(n/2) agents
    std::vector<AgentId> second; // floor(n/2) agents
    bool operator==(const Bipartition&) const = default;
};

/// A split into parts of sizes ceil(n/2), floor(n/2) with every cross edge
/// present. Non-adjacent agents must share a part, so the parts are unions
/// of complement-graph components chosen by a subset-sum table. The first
/// part is the lexicographically least feasible one.
std::optional<Bipartition> detect_balanced_bipartite(const CommGraph& g);

/// Undirected graph of the mutually-linked pairs of a digraph.
CommGraph mirror_graph(const CommGraph& g);

bool is_strongly_connected(const CommGraph& g);

/// Agents reachable from `source` (following arc direction when directed).
std::vector<bool> reachable_from(const CommGraph& g, AgentId source);

} // namespace epigossip
