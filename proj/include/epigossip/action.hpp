#pragma once

#include "epigossip/fluent.hpp"
#include "epigossip/knowledge_state.hpp"

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace epigossip {

enum class Mode { two_way, one_way, parallel };

std::string_view to_string(Mode m) noexcept;
std::optional<Mode> parse_mode(std::string_view s) noexcept;

struct TwoWayCall {
    AgentId i = 0;
    AgentId j = 0;
    bool operator==(const TwoWayCall&) const = default;
};

struct OneWayCall {
    AgentId from = 0;
    AgentId to = 0;
    bool operator==(const OneWayCall&) const = default;
};

struct Change {
    AgentId agent = 0;
    bool operator==(const Change&) const = default;
};

/// Simultaneous two-way calls; no agent may appear twice.
struct ParallelStep {
    std::vector<TwoWayCall> calls;
    bool operator==(const ParallelStep&) const = default;
};

/// One plan entry: a sequential action or a parallel time step.
using PlanItem = std::variant<TwoWayCall, OneWayCall, Change, ParallelStep>;

std::string to_string(const PlanItem& item);

struct Plan {
    Mode mode = Mode::two_way;
    std::vector<PlanItem> items;
    /// Protocol generators work on a renumbered instance; labels[k-1] is the
    /// original agent that played role k. Empty when no renumbering was used.
    std::vector<AgentId> labels;

    /// Calls (sequential modes) or time steps (parallel mode); changes count as items.
    std::size_t length() const noexcept { return items.size(); }

    bool operator==(const Plan& other) const { return mode == other.mode && items == other.items; }
};

/// Throws std::invalid_argument when an agent appears in two calls.
void check_disjoint(const ParallelStep& step, int n);

/// Sequential application of the step's calls (order-independent).
KnowledgeState apply_parallel_step(const KnowledgeState& st, const ParallelStep& step);

/// Applies one plan item with no graph or mode checks.
KnowledgeState apply_item(const KnowledgeState& st, const PlanItem& item);

} // namespace epigossip
