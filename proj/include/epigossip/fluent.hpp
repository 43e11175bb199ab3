#pragma once

#include <compare>
#include <cstddef>
#include <string>
#include <vector>

namespace epigossip {

/// Agents are numbered 1..n.
using AgentId = int;

/// K_{k1} K_{k2} ... K_{kr} s_j, stored outermost knower first.
/// An empty knower list is the bare secret s_j (depth 0).
struct Fluent {
    std::vector<AgentId> knowers;
    AgentId secret = 0;

    std::size_t depth() const noexcept { return knowers.size(); }

    auto operator<=>(const Fluent&) const = default;
    bool operator==(const Fluent&) const = default;
};

Fluent secret_of(AgentId owner);

/// a :: f, i.e. K_a f (not canonicalized).
Fluent prepend(AgentId a, const Fluent& f);

/// Collapses runs of equal consecutive knowers (K_a K_a f == K_a f).
Fluent canonicalize(Fluent f);

bool is_canonical(const Fluent& f) noexcept;

/// True iff the innermost knower owns the secret. Such fluents hold in every
/// reachable state. Throws std::invalid_argument on depth 0.
bool is_self_evident(const Fluent& f);

/// "K1 K2 s3" style rendering.
std::string to_string(const Fluent& f);

struct SignedGoal {
    bool positive = true;
    Fluent fluent;

    auto operator<=>(const SignedGoal&) const = default;
    bool operator==(const SignedGoal&) const = default;
};

std::string to_string(const SignedGoal& g);

/// All positive goals of depth r-1 over agents 1..n, canonical, with
/// duplicates and self-evident members removed. Requires r >= 2.
std::vector<SignedGoal> goal_T(int n, int r);

} // namespace epigossip
