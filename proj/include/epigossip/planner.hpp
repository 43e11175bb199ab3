#pragma once

#include "epigossip/action.hpp"
#include "epigossip/instance.hpp"
#include "epigossip/knowledge_state.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace epigossip {

/// Runs the plan from the initial state. Throws PlanExecutionError naming the
/// offending item for a wrong item kind, a call off the graph, a forbidden
/// change or a malformed parallel step.
KnowledgeState execute(const ProblemInstance& instance, const Plan& plan);

struct VerificationReport {
    bool success = false;
    std::optional<SignedGoal> failing_goal;
    /// Stored truth count after each item, when requested.
    std::optional<std::vector<std::size_t>> state_trace;
};

/// Goals are checked in instance order; the first unmet one is reported.
VerificationReport verify(const ProblemInstance& instance, const Plan& plan, bool with_trace = false);

/// A reason the instance cannot be solved, found by cheap necessary
/// conditions: negative goals on self-evident fluents, and positive goals
/// whose knowledge walk j -> i_r -> ... -> i_1 does not exist in the graph.
std::optional<std::string> quick_infeasible(const ProblemInstance& instance);

enum class SearchStatus { found, proven_absent, budget_exhausted };

std::string_view to_string(SearchStatus s) noexcept;

struct SearchOptions {
    /// Expanded-node limit; 0 means unlimited.
    std::uint64_t node_budget = 0;
    /// Skip moves that leave the (goal-relevant part of the) state unchanged.
    bool prune_noops = true;
    /// Without changes at depth cap 1, only try calls that teach some agent
    /// a secret whose positive goal is still open.
    bool prune_detours = true;
    bool memoize = true;
    /// At depth cap 1 with at most 64 agents, store a state as one word of
    /// known secrets per agent instead of the general fluent bitset.
    bool compact_states = true;
    /// Workers sharing the top-level branches of each iteration.
    int threads = 1;
};

struct SearchResult {
    SearchStatus status = SearchStatus::proven_absent;
    std::optional<Plan> plan;
    /// Largest length for which no plan exists (-1 when nothing was ruled
    /// out, e.g. the empty plan already works).
    int exhausted_length = -1;
    /// Length limit the search ran against.
    int bound = 0;
    std::uint64_t nodes = 0;
};

/// Iterative deepening over sequential actions (calls, plus changes when
/// allowed). A found plan is shortest, and the lexicographically first
/// shortest one under the move order (min endpoint, max endpoint, kind).
SearchResult search_optimal(const ProblemInstance& instance, int max_len, const SearchOptions& options = {});

/// Iterative deepening over time steps, each a nonempty matching of the
/// graph. Parallel mode only.
SearchResult min_parallel_steps(const ProblemInstance& instance, int max_steps,
                                const SearchOptions& options = {});

/// m*d*(n-1), plus n when changes are allowed; m is the goal count and d
/// the deepest goal. For parallel mode the same number bounds the steps.
long long negative_goal_bound(const ProblemInstance& instance);

struct NegOptions {
    SearchOptions search;
    /// Iterative deepening for a shortest plan instead of one depth-first
    /// pass followed by greedy shortening.
    bool shortest = false;
};

/// Complete search up to negative_goal_bound; absence within the bound is
/// absence outright.
SearchResult solve_neg(const ProblemInstance& instance, const NegOptions& options = {});

/// Agents 1..n mapped to levels. Edges join every pair on adjacent levels;
/// goals ask each agent to know the secrets of all lower levels and no agent
/// to know a secret from a higher level. The plan sweeps upwards: every
/// agent calls each agent one level up, after which those agents change
/// their secrets.
std::pair<ProblemInstance, Plan> hierarchy_demo(const std::map<AgentId, int>& levels);

} // namespace epigossip
