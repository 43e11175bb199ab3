#include "epigossip/reduction.hpp"

#include "epigossip/error.hpp"

#include <algorithm>
#include <cstdlib>
#include <sstream>
#include <stdexcept>

namespace epigossip {

CnfFormula normalize(const CnfFormula& cnf) {
    if (cnf.var_count < 0)
        throw std::invalid_argument("negative variable count");
    CnfFormula out{cnf.var_count, {}};
    for (std::size_t c = 0; c < cnf.clauses.size(); ++c) {
        std::vector<int> clause = cnf.clauses[c];
        if (clause.empty())
            throw std::invalid_argument("clause " + std::to_string(c + 1) + " is empty");
        for (int lit : clause)
            if (lit == 0 || std::abs(lit) > cnf.var_count)
                throw std::invalid_argument("clause " + std::to_string(c + 1) + ": literal " + std::to_string(lit) +
                                            " outside 1.." + std::to_string(cnf.var_count));
        std::sort(clause.begin(), clause.end(), [](int a, int b) {
            return std::abs(a) != std::abs(b) ? std::abs(a) < std::abs(b) : a > b;
        });
        clause.erase(std::unique(clause.begin(), clause.end()), clause.end());
        bool tautology = false;
        for (std::size_t k = 0; k + 1 < clause.size(); ++k)
            if (clause[k] == -clause[k + 1])
                tautology = true;
        if (!tautology)
            out.clauses.push_back(std::move(clause));
    }
    return out;
}

CnfFormula parse_dimacs(std::string_view text) {
    CnfFormula cnf;
    bool header = false;
    std::size_t declared = 0;
    std::vector<int> current;
    int line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const std::size_t end = std::min(text.find('\n', pos), text.size());
        std::string line(text.substr(pos, end - pos));
        pos = end + 1;
        ++line_no;
        if (!line.empty() && line.back() == '\r')
            line.pop_back();
        const auto first = line.find_first_not_of(" \t");
        if (first == std::string::npos || line[first] == 'c' || line[first] == '%')
            continue;
        const int col = static_cast<int>(first) + 1;
        std::istringstream in(line);
        if (line[first] == 'p') {
            std::string p, fmt;
            long long v = -1, c = -1;
            if (header)
                throw ParseError(line_no, col, "duplicate problem line");
            if (!(in >> p >> fmt >> v >> c) || p != "p" || fmt != "cnf" || v < 0 || c < 0)
                throw ParseError(line_no, col, "expected 'p cnf <vars> <clauses>'");
            std::string extra;
            if (in >> extra)
                throw ParseError(line_no, col, "trailing text after problem line");
            cnf.var_count = static_cast<int>(v);
            declared = static_cast<std::size_t>(c);
            header = true;
            continue;
        }
        if (!header)
            throw ParseError(line_no, col, "clause before 'p cnf' header");
        std::string tok;
        std::size_t scan = 0;
        while (in >> tok) {
            const std::size_t at = line.find(tok, scan);
            scan = at + tok.size();
            const int tcol = static_cast<int>(at) + 1;
            char* stop = nullptr;
            const long lit = std::strtol(tok.c_str(), &stop, 10);
            if (*stop != '\0')
                throw ParseError(line_no, tcol, "not an integer: '" + tok + "'");
            if (lit == 0) {
                if (current.empty())
                    throw ParseError(line_no, tcol, "empty clause");
                cnf.clauses.push_back(std::move(current));
                current.clear();
                continue;
            }
            if (std::labs(lit) > cnf.var_count)
                throw ParseError(line_no, tcol, "literal " + tok + " exceeds declared variable count");
            current.push_back(static_cast<int>(lit));
        }
    }
    if (!header)
        throw ParseError(line_no, 1, "missing 'p cnf' header");
    if (!current.empty())
        cnf.clauses.push_back(std::move(current));
    if (cnf.clauses.size() != declared)
        throw ParseError(line_no, 1,
                         "header declares " + std::to_string(declared) + " clauses, found " +
                             std::to_string(cnf.clauses.size()));
    return cnf;
}

std::string to_dimacs(const CnfFormula& cnf) {
    std::string out = "p cnf " + std::to_string(cnf.var_count) + " " + std::to_string(cnf.clauses.size()) + "\n";
    for (const auto& clause : cnf.clauses) {
        for (int lit : clause)
            out += std::to_string(lit) + " ";
        out += "0\n";
    }
    return out;
}

bool satisfies(const CnfFormula& cnf, const Assignment& assignment) {
    if (static_cast<int>(assignment.size()) != cnf.var_count)
        return false;
    return std::all_of(cnf.clauses.begin(), cnf.clauses.end(), [&](const std::vector<int>& clause) {
        return std::any_of(clause.begin(), clause.end(), [&](int lit) {
            return assignment[static_cast<std::size_t>(std::abs(lit) - 1)] == (lit > 0);
        });
    });
}

std::optional<Assignment> sat_oracle(const CnfFormula& cnf) {
    if (cnf.var_count > 20)
        throw std::invalid_argument("sat_oracle handles at most 20 variables");
    const auto n = static_cast<std::size_t>(cnf.var_count);
    Assignment a(n, false);
    for (std::uint32_t bits = 0; bits < (std::uint32_t{1} << n); ++bits) {
        for (std::size_t k = 0; k < n; ++k)
            a[k] = (bits >> k) & 1U;
        if (satisfies(cnf, a))
            return a;
    }
    return std::nullopt;
}

AgentId ReductionMap::literal_node(int literal) const {
    const auto& v = variables.at(static_cast<std::size_t>(std::abs(literal) - 1));
    return literal > 0 ? v.positive : v.negative;
}

std::pair<ProblemInstance, ReductionMap> sat_to_gossip(const CnfFormula& input) {
    ReductionMap map;
    map.cnf = normalize(input);
    const int v = map.cnf.var_count;
    const int c = static_cast<int>(map.cnf.clauses.size());
    const int n = 1 + 4 * v + c;

    for (int k = 0; k < v; ++k) {
        const AgentId base = 2 + 4 * k;
        map.variables.push_back(VariableNodes{base, base + 1, base + 2, base + 3});
    }
    for (int j = 0; j < c; ++j)
        map.clauses.push_back(1 + 4 * v + 1 + j);

    ProblemInstance inst;
    inst.graph = CommGraph(n, false);
    inst.mode = Mode::two_way;
    inst.depth_cap = 1;
    inst.allow_change = false;

    const AgentId a = map.source;
    for (const auto& x : map.variables) {
        inst.graph.add_edge(a, x.positive);
        inst.graph.add_edge(a, x.negative);
        inst.graph.add_edge(x.b, x.positive);
        inst.graph.add_edge(x.b, x.negative);
        inst.graph.add_edge(x.positive, x.d);
        inst.graph.add_edge(x.negative, x.d);
    }
    for (int j = 0; j < c; ++j)
        for (int lit : map.cnf.clauses[static_cast<std::size_t>(j)])
            inst.graph.add_edge(map.clauses[static_cast<std::size_t>(j)], map.literal_node(lit));

    const auto knows = [](bool positive, AgentId who, AgentId owner) {
        return SignedGoal{positive, Fluent{{who}, owner}};
    };
    for (AgentId cj : map.clauses)
        inst.goals.push_back(knows(true, cj, a));
    for (const auto& x : map.variables) {
        inst.goals.push_back(knows(true, x.d, x.b));
        inst.goals.push_back(knows(false, x.d, a));
    }
    for (int k = 0; k < v; ++k)
        for (int j = 0; j < c; ++j) {
            const auto& clause = map.cnf.clauses[static_cast<std::size_t>(j)];
            const bool mentions =
                std::any_of(clause.begin(), clause.end(), [k](int lit) { return std::abs(lit) == k + 1; });
            if (mentions)
                inst.goals.push_back(
                    knows(false, map.clauses[static_cast<std::size_t>(j)], map.variables[static_cast<std::size_t>(k)].b));
        }
    return {std::move(inst), std::move(map)};
}

Assignment extract_assignment(const Plan& plan, const ReductionMap& map) {
    const int v = map.cnf.var_count;
    int n = 1 + 4 * v + static_cast<int>(map.clauses.size());
    std::vector<bool> has_a(static_cast<std::size_t>(n) + 1, false);
    has_a[static_cast<std::size_t>(map.source)] = true;
    std::vector<bool> is_clause(static_cast<std::size_t>(n) + 1, false);
    for (AgentId cj : map.clauses)
        is_clause[static_cast<std::size_t>(cj)] = true;
    // literal_of[agent] = +k / -k for the node of x_k / not x_k, else 0.
    std::vector<int> literal_of(static_cast<std::size_t>(n) + 1, 0);
    for (int k = 0; k < v; ++k) {
        literal_of[static_cast<std::size_t>(map.variables[static_cast<std::size_t>(k)].positive)] = k + 1;
        literal_of[static_cast<std::size_t>(map.variables[static_cast<std::size_t>(k)].negative)] = -(k + 1);
    }
    std::vector<bool> via_pos(static_cast<std::size_t>(v), false);
    std::vector<bool> via_neg(static_cast<std::size_t>(v), false);

    const auto check = [&](AgentId lit_node, AgentId other) {
        if (lit_node < 1 || lit_node > n || other < 1 || other > n)
            throw std::out_of_range("plan names an agent outside the reduced instance");
        const int lit = literal_of[static_cast<std::size_t>(lit_node)];
        if (lit != 0 && is_clause[static_cast<std::size_t>(other)] && has_a[static_cast<std::size_t>(lit_node)])
            (lit > 0 ? via_pos : via_neg)[static_cast<std::size_t>(std::abs(lit) - 1)] = true;
    };
    const auto call = [&](AgentId from, AgentId to, bool both_ways) {
        check(from, to);
        if (both_ways)
            check(to, from);
        const bool any = has_a[static_cast<std::size_t>(from)] || (both_ways && has_a[static_cast<std::size_t>(to)]);
        if (any) {
            has_a[static_cast<std::size_t>(to)] = true;
            if (both_ways)
                has_a[static_cast<std::size_t>(from)] = true;
        }
    };
    for (const auto& item : plan.items) {
        if (const auto* c = std::get_if<TwoWayCall>(&item)) {
            call(c->i, c->j, true);
        } else if (const auto* c = std::get_if<OneWayCall>(&item)) {
            call(c->from, c->to, false);
        } else if (const auto* c = std::get_if<Change>(&item)) {
            if (c->agent == map.source) {
                std::fill(has_a.begin(), has_a.end(), false);
                has_a[static_cast<std::size_t>(map.source)] = true;
            }
        } else {
            for (const auto& s : std::get<ParallelStep>(item).calls)
                call(s.i, s.j, true);
        }
    }

    Assignment out(static_cast<std::size_t>(v), false);
    for (int k = 0; k < v; ++k) {
        if (via_pos[static_cast<std::size_t>(k)] && via_neg[static_cast<std::size_t>(k)])
            throw std::logic_error("secret of the source transits both x" + std::to_string(k + 1) + " and its negation");
        out[static_cast<std::size_t>(k)] = via_pos[static_cast<std::size_t>(k)];
    }
    return out;
}

} // namespace epigossip
