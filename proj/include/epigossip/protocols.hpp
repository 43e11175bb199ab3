#pragma once

#include "epigossip/action.hpp"
#include "epigossip/graph.hpp"
#include "epigossip/instance.hpp"

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace epigossip {

enum class Protocol { spanning_tree, hamiltonian, bipartite, directional, parallel };

std::string_view to_string(Protocol p) noexcept;

/// Closed-form plan length (calls, or steps for `parallel`) of each
/// generator for n agents and goal depth d.
long long protocol_length(Protocol p, int n, int d);

/// Smallest k with 2^k >= n.
int ceil_log2(int n) noexcept;

/// The two hubs of a K_{2,n-2} together with a split of the remaining agents
/// into two nonempty fans.
struct BipartiteSplit {
    AgentId hub1 = 0;
    AgentId hub2 = 0;
    std::vector<AgentId> left;
    std::vector<AgentId> right;
};

/// Sorted non-hub agents, first half (rounded up) to `left`.
BipartiteSplit make_bipartite_split(int n, std::pair<AgentId, AgentId> hubs);

/// 2d passes over the tree: odd passes gather towards the root (leaves first,
/// the child's subtree after the rest, then root <-> child), even passes
/// push back down. d(2n-3) calls.
Plan spanning_tree_protocol(const CommGraph& g, const RootedTree& tree, int d);

/// d scans along the path; the first scan goes down then back up.
/// 1 + (d+1)(n-2) calls.
Plan hamiltonian_protocol(const CommGraph& g, std::span<const AgentId> path, int d);

/// d+1 passes in which each hub fans out over one side and back.
/// (d+1)(n-2) calls.
Plan bipartite_protocol(const CommGraph& g, const BipartiteSplit& split, int d);

/// d+1 one-way sweeps alternating direction along a path of the mirror
/// graph. (d+1)(n-1) calls.
Plan directional_protocol(const CommGraph& g, std::span<const AgentId> path, int d);

/// Log-round doubling across a balanced complete bipartite subgraph.
/// d(ceil(log2 n)-1)+1 steps for even n, d*ceil(log2 n)+1 for odd n.
Plan parallel_protocol(const CommGraph& g, const Bipartition& parts, int d);

struct Selection {
    std::optional<Plan> plan;
    std::optional<Protocol> protocol;
    /// Structural condition that failed when no plan is returned.
    std::string reason;
};

/// Cheapest applicable generator for an instance whose goals are exactly
/// goal_T(n, d+1) for its deepest goal depth d. Throws
/// std::invalid_argument for other goal sets.
Selection auto_select(const ProblemInstance& instance);

} // namespace epigossip
