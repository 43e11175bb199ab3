#pragma once

#include "epigossip/action.hpp"
#include "epigossip/instance.hpp"

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace epigossip {

/// Clauses of signed 1-based variable indices (DIMACS convention).
struct CnfFormula {
    int var_count = 0;
    std::vector<std::vector<int>> clauses;

    bool operator==(const CnfFormula&) const = default;
};

/// Sorts and dedupes literals inside each clause and drops clauses holding
/// both x and -x. Throws std::invalid_argument on an empty clause, a zero
/// literal or a variable outside 1..var_count.
CnfFormula normalize(const CnfFormula& cnf);

/// `p cnf V C` header, `c` comment lines, 0-terminated clauses. Throws
/// ParseError.
CnfFormula parse_dimacs(std::string_view text);
std::string to_dimacs(const CnfFormula& cnf);

/// assignment[k] is the value of variable k+1.
using Assignment = std::vector<bool>;

bool satisfies(const CnfFormula& cnf, const Assignment& assignment);

/// Truth-table search in binary counting order (variable 1 lowest).
/// Throws std::invalid_argument above 20 variables.
std::optional<Assignment> sat_oracle(const CnfFormula& cnf);

struct VariableNodes {
    AgentId positive = 0; // x
    AgentId negative = 0; // not x
    AgentId b = 0;
    AgentId d = 0;
};

/// Agent numbering of a reduced instance: the source is 1, variable k
/// occupies 2+4(k-1) .. 5+4(k-1) as (x, not x, b, d), clause nodes follow.
struct ReductionMap {
    AgentId source = 1;
    std::vector<VariableNodes> variables;
    std::vector<AgentId> clauses;
    /// The normalized formula the instance encodes.
    CnfFormula cnf;

    AgentId literal_node(int literal) const;
};

/// Depth-1 two-way instance without changes whose solutions correspond to
/// the models of the (normalized) formula. Every clause node must learn
/// s_a, every d_x must learn s_{b_x} but not s_a, and no clause node may
/// learn s_{b_x} for a variable it mentions.
std::pair<ProblemInstance, ReductionMap> sat_to_gossip(const CnfFormula& cnf);

/// x is true iff the literal node x calls a clause node while knowing s_a.
/// Throws std::logic_error if both x and not x do so.
Assignment extract_assignment(const Plan& plan, const ReductionMap& map);

} // namespace epigossip
