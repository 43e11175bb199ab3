#include "epigossip/fluent.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

namespace epigossip {

Fluent secret_of(AgentId owner) {
    return Fluent{{}, owner};
}

Fluent prepend(AgentId a, const Fluent& f) {
    Fluent out;
    out.knowers.reserve(f.knowers.size() + 1);
    out.knowers.push_back(a);
    out.knowers.insert(out.knowers.end(), f.knowers.begin(), f.knowers.end());
    out.secret = f.secret;
    return out;
}

Fluent canonicalize(Fluent f) {
    auto last = std::unique(f.knowers.begin(), f.knowers.end());
    f.knowers.erase(last, f.knowers.end());
    return f;
}

bool is_canonical(const Fluent& f) noexcept {
    return std::adjacent_find(f.knowers.begin(), f.knowers.end()) == f.knowers.end();
}

bool is_self_evident(const Fluent& f) {
    if (f.knowers.empty())
        throw std::invalid_argument("is_self_evident: depth-0 fluent " + to_string(f));
    return f.knowers.back() == f.secret;
}

std::string to_string(const Fluent& f) {
    std::string s;
    for (AgentId k : f.knowers) {
        s += 'K';
        s += std::to_string(k);
        s += ' ';
    }
    s += 's';
    s += std::to_string(f.secret);
    return s;
}

std::string to_string(const SignedGoal& g) {
    return g.positive ? to_string(g.fluent) : "not(" + to_string(g.fluent) + ")";
}

std::vector<SignedGoal> goal_T(int n, int r) {
    if (r < 2)
        throw std::invalid_argument("goal_T: r must be >= 2");
    if (n < 1)
        throw std::invalid_argument("goal_T: n must be >= 1");

    // Enumerate all r-tuples (i_1..i_{r-1}, j) in odometer order.
    std::set<Fluent> seen;
    std::vector<SignedGoal> out;
    std::vector<AgentId> tuple(static_cast<std::size_t>(r), 1);
    for (;;) {
        Fluent f{{tuple.begin(), tuple.end() - 1}, tuple.back()};
        f = canonicalize(std::move(f));
        if (!is_self_evident(f) && seen.insert(f).second)
            out.push_back(SignedGoal{true, f});

        int pos = r - 1;
        while (pos >= 0 && tuple[static_cast<std::size_t>(pos)] == n) {
            tuple[static_cast<std::size_t>(pos)] = 1;
            --pos;
        }
        if (pos < 0)
            break;
        ++tuple[static_cast<std::size_t>(pos)];
    }
    return out;
}

} // namespace epigossip
