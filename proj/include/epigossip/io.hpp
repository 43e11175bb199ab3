#pragma once

#include "epigossip/action.hpp"
#include "epigossip/instance.hpp"
#include "epigossip/protocols.hpp"

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace epigossip {

/// Line-oriented problem text, `#` starts a comment:
///
///     agents N
///     mode two-way|one-way|parallel
///     depth D             (depth cap; defaults to the deepest goal, min 1)
///     change on|off
///     edge I J            (an arc I -> J in one-way mode)
///     goal +|- A1 .. Ak S (K_A1 .. K_Ak s_S, negated for '-')
///     goal-all-depth D    (every depth-D fluent as a positive goal)
///
/// `agents` must precede edges and goals and `mode` must precede edges.
/// Throws ParseError with a 1-based line and column.
ProblemInstance parse_problem(std::string_view text);

/// Header lines, then edges in sorted order, then goals in instance order.
std::string serialize_problem(const ProblemInstance& instance);

/// One item per line: `call I J`, `send I J`, `change I` or
/// `step call I J; call K L; ...`. The mode follows from the item kinds;
/// `fallback` is used when only changes appear. Throws ParseError.
Plan parse_plan(std::string_view text, Mode fallback = Mode::two_way);

std::string serialize_plan(const Plan& plan);

struct StatsRow {
    Mode mode = Mode::two_way;
    int n = 0;
    int d = 0;
    Protocol protocol = Protocol::bipartite;
    long long measured = 0;
    long long formula = 0;
    bool match = false;
    /// Set when the sweep also verified the plan.
    std::optional<bool> verified;
};

/// Complete (di)graph, goals every depth-d fluent, plan from auto_select.
/// Requires 2 <= n.
std::vector<StatsRow> sweep_stats(Mode mode, int n_lo, int n_hi, int d_lo, int d_hi, bool verify_plans);

/// `mode,n,d,protocol,calls_or_steps,formula,match` plus one LF-terminated
/// line per row.
std::string emit_stats_csv(const std::vector<StatsRow>& rows);

} // namespace epigossip
