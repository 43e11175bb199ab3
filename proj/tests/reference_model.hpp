#pragma once

// Literal, set-based restatement of the knowledge semantics, used as an
// oracle for the bitset implementation. Nothing here is shared with src/.

#include "epigossip/action.hpp"
#include "epigossip/fluent.hpp"
#include "epigossip/knowledge_state.hpp"

#include <deque>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <vector>

namespace ref {

using epigossip::AgentId;
using epigossip::Fluent;

inline Fluent collapse(Fluent f) {
    std::vector<AgentId> out;
    for (AgentId a : f.knowers)
        if (out.empty() || out.back() != a)
            out.push_back(a);
    f.knowers = out;
    return f;
}

inline bool self_evident(const Fluent& f) { return !f.knowers.empty() && f.knowers.back() == f.secret; }

struct State {
    int n = 0;
    int cap = 0;
    std::set<Fluent> truths;

    bool holds(const Fluent& raw) const {
        if (raw.knowers.empty())
            return true;
        const Fluent f = collapse(raw);
        if (static_cast<int>(f.knowers.size()) > cap)
            throw std::out_of_range("too deep");
        return self_evident(f) || truths.count(f) > 0;
    }
    bool knows(AgentId a, const Fluent& f) const {
        Fluent g = f;
        g.knowers.insert(g.knowers.begin(), a);
        return holds(g);
    }
    bool operator==(const State&) const = default;
};

inline State initial(int n, int cap) { return State{n, cap, {}}; }

// Every fluent (canonical or not) of depth 0..max_depth over agents 1..n.
inline std::vector<Fluent> all_fluents(int n, int max_depth) {
    std::vector<Fluent> out;
    for (int r = 0; r <= max_depth; ++r) {
        std::vector<AgentId> seq(static_cast<std::size_t>(r) + 1, 1);
        for (;;) {
            Fluent f;
            f.knowers.assign(seq.begin(), seq.end() - 1);
            f.secret = seq.back();
            out.push_back(f);
            std::size_t k = 0;
            while (k < seq.size() && seq[k] == n) {
                seq[k] = 1;
                ++k;
            }
            if (k == seq.size())
                break;
            ++seq[k];
        }
    }
    return out;
}

// Nonempty sequences over {i, j} of length <= len.
inline std::vector<std::vector<AgentId>> words(AgentId i, AgentId j, int len) {
    std::vector<std::vector<AgentId>> out;
    std::vector<std::vector<AgentId>> layer{{}};
    for (int l = 1; l <= len; ++l) {
        std::vector<std::vector<AgentId>> next;
        for (const auto& w : layer)
            for (AgentId x : {i, j}) {
                auto v = w;
                v.push_back(x);
                next.push_back(v);
            }
        out.insert(out.end(), next.begin(), next.end());
        layer = std::move(next);
    }
    return out;
}

inline void add(State& s, const Fluent& raw) {
    const Fluent f = collapse(raw);
    if (f.knowers.empty() || self_evident(f) || static_cast<int>(f.knowers.size()) > s.cap)
        return;
    s.truths.insert(f);
}

inline State two_way(const State& st, AgentId i, AgentId j) {
    State out = st;
    for (const auto& f : all_fluents(st.n, st.cap - 1)) {
        if (!st.knows(i, f) && !st.knows(j, f))
            continue;
        for (const auto& w : words(i, j, st.cap)) {
            Fluent g = f;
            g.knowers.insert(g.knowers.begin(), w.begin(), w.end());
            add(out, g);
        }
    }
    return out;
}

inline State one_way(const State& st, AgentId from, AgentId to) {
    State out = st;
    for (const auto& f : all_fluents(st.n, st.cap - 1)) {
        if (!st.knows(from, f))
            continue;
        Fluent g = f;
        g.knowers.insert(g.knowers.begin(), to);
        add(out, g);
    }
    return out;
}

inline State change(const State& st, AgentId i) {
    State out = st;
    std::erase_if(out.truths, [i](const Fluent& f) { return f.secret == i; });
    return out;
}

inline State apply(const State& st, const epigossip::PlanItem& item) {
    if (const auto* c = std::get_if<epigossip::TwoWayCall>(&item))
        return two_way(st, c->i, c->j);
    if (const auto* c = std::get_if<epigossip::OneWayCall>(&item))
        return one_way(st, c->from, c->to);
    if (const auto* c = std::get_if<epigossip::Change>(&item))
        return change(st, c->agent);
    State out = st;
    for (const auto& c : std::get<epigossip::ParallelStep>(item).calls)
        out = two_way(out, c.i, c.j);
    return out;
}

inline std::set<Fluent> as_set(const epigossip::KnowledgeState& s) {
    const auto v = s.truths();
    return {v.begin(), v.end()};
}

// All depth-(r-1) positive goals, literally: enumerate sequences, collapse,
// drop self-evident ones.
inline std::set<Fluent> full_goals(int n, int r) {
    std::set<Fluent> out;
    for (const auto& f : all_fluents(n, r - 1)) {
        if (static_cast<int>(f.knowers.size()) != r - 1)
            continue;
        const Fluent g = collapse(f);
        if (!self_evident(g))
            out.insert(g);
    }
    return out;
}

// Breadth-first shortest plan length over the given moves; nothing is
// pruned except repeated states.
inline std::optional<int> bfs_optimum(int n, int cap, const std::vector<epigossip::PlanItem>& moves,
                                      const std::vector<std::pair<bool, Fluent>>& goals, int max_len) {
    const auto done = [&](const State& s) {
        for (const auto& [positive, f] : goals)
            if (s.holds(f) != positive)
                return false;
        return true;
    };
    std::set<std::set<Fluent>> seen;
    std::vector<State> layer{initial(n, cap)};
    seen.insert(layer.front().truths);
    for (int len = 0; len <= max_len; ++len) {
        for (const auto& s : layer)
            if (done(s))
                return len;
        std::vector<State> next;
        for (const auto& s : layer)
            for (const auto& m : moves) {
                State t = apply(s, m);
                if (seen.insert(t.truths).second)
                    next.push_back(std::move(t));
            }
        layer = std::move(next);
    }
    return std::nullopt;
}

} // namespace ref
