#include "epigossip/instance.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace epigossip {

int ProblemInstance::max_goal_depth() const noexcept {
    int d = 0;
    for (const auto& g : goals)
        d = std::max(d, static_cast<int>(g.fluent.depth()));
    return d;
}

void ProblemInstance::validate() const {
    const int n = agent_count();
    if (n < 1)
        throw std::invalid_argument("instance needs at least one agent");
    if (depth_cap < 1)
        throw std::invalid_argument("depth cap must be >= 1");
    if ((mode == Mode::one_way) != graph.directed())
        throw std::invalid_argument(std::string("mode ") + std::string(to_string(mode)) +
                                    (graph.directed() ? " cannot use a directed graph"
                                                      : " requires a directed graph"));
    for (const auto& g : goals) {
        if (g.fluent.depth() == 0)
            throw std::invalid_argument("goal on a bare secret: " + to_string(g));
        if (!is_canonical(g.fluent))
            throw std::invalid_argument("goal not canonical: " + to_string(g));
        if (static_cast<int>(g.fluent.depth()) > depth_cap)
            throw std::invalid_argument("goal " + to_string(g) + " deeper than depth cap " +
                                        std::to_string(depth_cap));
        const auto in_range = [n](AgentId a) { return a >= 1 && a <= n; };
        if (!in_range(g.fluent.secret) ||
            !std::all_of(g.fluent.knowers.begin(), g.fluent.knowers.end(), in_range))
            throw std::invalid_argument("goal " + to_string(g) + " names an agent outside 1.." +
                                        std::to_string(n));
    }
}

ProblemInstance full_gossip_instance(int n, int d, Mode mode) {
    ProblemInstance inst;
    inst.graph = mode == Mode::one_way ? CommGraph::complete_digraph(n) : CommGraph::complete(n);
    inst.mode = mode;
    inst.goals = goal_T(n, d + 1);
    inst.depth_cap = d + 1;
    return inst;
}

} // namespace epigossip
