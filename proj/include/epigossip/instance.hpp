#pragma once

#include "epigossip/action.hpp"
#include "epigossip/fluent.hpp"
#include "epigossip/graph.hpp"

#include <vector>

namespace epigossip {

struct ProblemInstance {
    CommGraph graph;
    Mode mode = Mode::two_way;
    std::vector<SignedGoal> goals;
    int depth_cap = 1;
    bool allow_change = false;

    int agent_count() const noexcept { return graph.agent_count(); }

    /// Deepest goal fluent (0 when there are no goals).
    int max_goal_depth() const noexcept;

    /// Throws std::invalid_argument when goals exceed the cap, reference
    /// unknown agents, or the graph direction does not match the mode.
    void validate() const;

    bool operator==(const ProblemInstance&) const = default;
};

/// Complete (di)graph instance whose goals are every depth-d fluent,
/// tracked at depth cap d+1.
ProblemInstance full_gossip_instance(int n, int d, Mode mode);

} // namespace epigossip
