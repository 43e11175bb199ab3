#include "epigossip/planner.hpp"

#include "epigossip/error.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <climits>
#include <mutex>
#include <set>
#include <stdexcept>
#include <thread>
#include <tuple>
#include <unordered_map>

namespace epigossip {

std::string_view to_string(SearchStatus s) noexcept {
    switch (s) {
    case SearchStatus::found:
        return "found";
    case SearchStatus::proven_absent:
        return "proven-absent";
    case SearchStatus::budget_exhausted:
        return "budget-exhausted";
    }
    return "?";
}

namespace {

bool on_graph(const CommGraph& g, AgentId a, AgentId b) {
    const int n = g.agent_count();
    return a >= 1 && a <= n && b >= 1 && b <= n && a != b && g.has_edge(a, b);
}

void check_item(const ProblemInstance& inst, const PlanItem& item, std::size_t index) {
    const auto& g = inst.graph;
    const int n = inst.agent_count();
    if (const auto* c = std::get_if<TwoWayCall>(&item)) {
        if (inst.mode != Mode::two_way)
            throw PlanExecutionError(index, "two-way call in " + std::string(to_string(inst.mode)) + " mode");
        if (!on_graph(g, c->i, c->j))
            throw PlanExecutionError(index, "no edge " + std::to_string(c->i) + " " + std::to_string(c->j));
    } else if (const auto* c = std::get_if<OneWayCall>(&item)) {
        if (inst.mode != Mode::one_way)
            throw PlanExecutionError(index, "one-way call in " + std::string(to_string(inst.mode)) + " mode");
        if (!on_graph(g, c->from, c->to))
            throw PlanExecutionError(index, "no arc " + std::to_string(c->from) + " -> " + std::to_string(c->to));
    } else if (const auto* c = std::get_if<Change>(&item)) {
        if (!inst.allow_change)
            throw PlanExecutionError(index, "change actions are not allowed");
        if (c->agent < 1 || c->agent > n)
            throw PlanExecutionError(index, "agent " + std::to_string(c->agent) + " out of range");
    } else {
        const auto& step = std::get<ParallelStep>(item);
        if (inst.mode != Mode::parallel)
            throw PlanExecutionError(index, "parallel step in " + std::string(to_string(inst.mode)) + " mode");
        try {
            check_disjoint(step, n);
        } catch (const std::exception& e) {
            throw PlanExecutionError(index, e.what());
        }
        for (const auto& c : step.calls)
            if (!on_graph(g, c.i, c.j))
                throw PlanExecutionError(index, "no edge " + std::to_string(c.i) + " " + std::to_string(c.j));
    }
}

bool goal_holds(const KnowledgeState& st, const SignedGoal& g) {
    return st.is_true(g.fluent) == g.positive;
}

} // namespace

KnowledgeState execute(const ProblemInstance& instance, const Plan& plan) {
    instance.validate();
    KnowledgeState st = initial_state(instance.agent_count(), instance.depth_cap);
    for (std::size_t k = 0; k < plan.items.size(); ++k) {
        check_item(instance, plan.items[k], k);
        st = apply_item(st, plan.items[k]);
    }
    return st;
}

VerificationReport verify(const ProblemInstance& instance, const Plan& plan, bool with_trace) {
    instance.validate();
    VerificationReport report;
    KnowledgeState st = initial_state(instance.agent_count(), instance.depth_cap);
    if (with_trace)
        report.state_trace.emplace();
    for (std::size_t k = 0; k < plan.items.size(); ++k) {
        check_item(instance, plan.items[k], k);
        st = apply_item(st, plan.items[k]);
        if (with_trace)
            report.state_trace->push_back(st.truth_count());
    }
    for (const auto& g : instance.goals) {
        if (!goal_holds(st, g)) {
            report.failing_goal = g;
            return report;
        }
    }
    report.success = true;
    return report;
}

std::optional<std::string> quick_infeasible(const ProblemInstance& instance) {
    instance.validate();
    const auto& g = instance.graph;
    const int n = instance.agent_count();
    for (const auto& goal : instance.goals)
        if (!goal.positive && is_self_evident(goal.fluent))
            return "negative goal " + to_string(goal) + " is on a self-evident fluent";

    std::vector<std::vector<bool>> reach(static_cast<std::size_t>(n) + 1);
    const auto reaches = [&](AgentId from, AgentId to) {
        auto& row = reach[static_cast<std::size_t>(from)];
        if (row.empty())
            row = reachable_from(g, from);
        return static_cast<bool>(row[static_cast<std::size_t>(to)]);
    };
    for (const auto& goal : instance.goals) {
        if (!goal.positive || is_self_evident(goal.fluent))
            continue;
        // The secret travels from its owner to the innermost knower, then outwards.
        AgentId at = goal.fluent.secret;
        for (auto it = goal.fluent.knowers.rbegin(); it != goal.fluent.knowers.rend(); ++it) {
            if (!reaches(at, *it))
                return "goal " + to_string(goal) + " needs a walk from " + std::to_string(at) + " to " +
                       std::to_string(*it) + " that the graph does not have";
            at = *it;
        }
    }
    return std::nullopt;
}

long long negative_goal_bound(const ProblemInstance& instance) {
    const long long m = static_cast<long long>(instance.goals.size());
    const long long d = instance.max_goal_depth();
    const long long n = instance.agent_count();
    long long bound = m * d * (n - 1);
    if (instance.allow_change)
        bound += n;
    return bound;
}

namespace {

using Bits = std::vector<std::uint64_t>;

// Dense representation: the full bitset, restricted to the secrets the goals
// mention (actions never mix knowledge about different secrets).
class DenseOps {
public:
    using State = KnowledgeState;

    explicit DenseOps(const ProblemInstance& inst)
        : n_(inst.agent_count()), cap_(inst.depth_cap), idx_(FluentIndexer::get(n_, cap_)) {
        std::vector<bool> relevant(static_cast<std::size_t>(n_) + 1, false);
        for (const auto& g : inst.goals) {
            relevant[static_cast<std::size_t>(g.fluent.secret)] = true;
            if (!is_self_evident(g.fluent))
                (g.positive ? positive_ : negative_).push_back(idx_->index_of(g.fluent));
        }
        if (std::count(relevant.begin() + 1, relevant.end(), true) < n_) {
            mask_.assign((idx_->size() + 63) / 64, 0);
            for (std::size_t b = 0; b < idx_->size(); ++b) {
                const int r = idx_->depth_of(b);
                const int secret = idx_->secret_of_code(b - idx_->offset(r), r) + 1;
                if (relevant[static_cast<std::size_t>(secret)])
                    mask_[b >> 6] |= std::uint64_t{1} << (b & 63);
            }
        }
        if (n_ <= 64) {
            first_order_.assign(static_cast<std::size_t>(n_) * static_cast<std::size_t>(n_), 0);
            for (int w = 0; w < n_; ++w)
                for (int j = 0; j < n_; ++j)
                    if (w != j)
                        first_order_[static_cast<std::size_t>(w * n_ + j)] = idx_->index_of(Fluent{{w + 1}, j + 1});
        }
    }

    State root() const { return initial_state(n_, cap_); }

    State step(const State& s, const PlanItem& m) const {
        State out = apply_item(s, m);
        if (!mask_.empty())
            out.intersect_with(mask_);
        return out;
    }

    bool satisfied(const State& s) const noexcept {
        for (auto b : positive_)
            if (!s.test_bit(b))
                return false;
        for (auto b : negative_)
            if (s.test_bit(b))
                return false;
        return true;
    }

    bool violated(const State& s) const noexcept {
        for (auto b : negative_)
            if (s.test_bit(b))
                return true;
        return false;
    }

    // known[w] = secrets agent w knows (own secret included). n <= 64.
    void first_order(const State& s, std::uint64_t* known) const noexcept {
        for (int w = 0; w < n_; ++w) {
            std::uint64_t k = std::uint64_t{1} << w;
            for (int j = 0; j < n_; ++j)
                if (j != w && s.test_bit(first_order_[static_cast<std::size_t>(w * n_ + j)]))
                    k |= std::uint64_t{1} << j;
            known[w] = k;
        }
    }

    static std::size_t hash(const State& s) noexcept { return s.hash(); }

private:
    int n_;
    int cap_;
    std::shared_ptr<const FluentIndexer> idx_;
    std::vector<std::size_t> positive_;
    std::vector<std::size_t> negative_;
    Bits mask_;
    std::vector<std::size_t> first_order_;
};

// Depth cap 1 with at most 64 agents: a state is one word per agent, the
// set of secrets that agent knows. Bit w of word w is always set.
class FirstOrderOps {
public:
    using State = Bits;

    explicit FirstOrderOps(const ProblemInstance& inst) : n_(inst.agent_count()) {
        std::uint64_t relevant = 0;
        for (const auto& g : inst.goals) {
            relevant |= bit(g.fluent.secret - 1);
            if (is_self_evident(g.fluent))
                continue;
            const Goal goal{g.fluent.knowers[0] - 1, bit(g.fluent.secret - 1)};
            (g.positive ? positive_ : negative_).push_back(goal);
        }
        keep_.resize(static_cast<std::size_t>(n_));
        for (int w = 0; w < n_; ++w)
            keep_[static_cast<std::size_t>(w)] = relevant | bit(w);
    }

    static bool applicable(const ProblemInstance& inst) { return inst.depth_cap == 1 && inst.agent_count() <= 64; }

    State root() const {
        State s(static_cast<std::size_t>(n_));
        for (int w = 0; w < n_; ++w)
            s[static_cast<std::size_t>(w)] = bit(w);
        return s;
    }

    State step(const State& s, const PlanItem& m) const {
        State out = s;
        if (const auto* c = std::get_if<TwoWayCall>(&m)) {
            call(out, c->i - 1, c->j - 1);
        } else if (const auto* c = std::get_if<OneWayCall>(&m)) {
            out[static_cast<std::size_t>(c->to - 1)] |= out[static_cast<std::size_t>(c->from - 1)];
        } else if (const auto* c = std::get_if<Change>(&m)) {
            const std::uint64_t b = bit(c->agent - 1);
            for (int w = 0; w < n_; ++w)
                if (w != c->agent - 1)
                    out[static_cast<std::size_t>(w)] &= ~b;
        } else {
            for (const auto& call2 : std::get<ParallelStep>(m).calls)
                call(out, call2.i - 1, call2.j - 1);
        }
        for (int w = 0; w < n_; ++w)
            out[static_cast<std::size_t>(w)] &= keep_[static_cast<std::size_t>(w)];
        return out;
    }

    bool satisfied(const State& s) const noexcept {
        for (const auto& g : positive_)
            if (!(s[static_cast<std::size_t>(g.agent)] & g.secret))
                return false;
        for (const auto& g : negative_)
            if (s[static_cast<std::size_t>(g.agent)] & g.secret)
                return false;
        return true;
    }

    bool violated(const State& s) const noexcept {
        for (const auto& g : negative_)
            if (s[static_cast<std::size_t>(g.agent)] & g.secret)
                return true;
        return false;
    }

    void first_order(const State& s, std::uint64_t* known) const noexcept {
        std::copy(s.begin(), s.end(), known);
    }

    static std::size_t hash(const State& s) noexcept {
        std::uint64_t h = 0x9e3779b97f4a7c15ULL;
        for (auto w : s) {
            h ^= w + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
            h *= 0xff51afd7ed558ccdULL;
        }
        return static_cast<std::size_t>(h ^ (h >> 33));
    }

private:
    struct Goal {
        int agent;
        std::uint64_t secret;
    };
    static std::uint64_t bit(int k) { return std::uint64_t{1} << k; }
    static void call(State& s, int i, int j) {
        const std::uint64_t u = s[static_cast<std::size_t>(i)] | s[static_cast<std::size_t>(j)];
        s[static_cast<std::size_t>(i)] = u;
        s[static_cast<std::size_t>(j)] = u;
    }

    int n_;
    std::vector<Goal> positive_;
    std::vector<Goal> negative_;
    std::vector<std::uint64_t> keep_;
};

// Grow-only map from state to the largest remaining budget known to fail.
template <class State, class Hash>
class Memo {
public:
    static constexpr int unbounded = INT_MAX;

    std::optional<int> find(const State& s) const {
        const auto& shard = shards_[shard_of(s)];
        std::lock_guard lock(shard.mutex);
        auto it = shard.map.find(s);
        if (it == shard.map.end())
            return std::nullopt;
        return it->second;
    }

    void raise(const State& s, int remaining) {
        auto& shard = shards_[shard_of(s)];
        std::lock_guard lock(shard.mutex);
        auto [it, inserted] = shard.map.try_emplace(s, remaining);
        if (!inserted && it->second < remaining)
            it->second = remaining;
    }

private:
    static constexpr std::size_t shard_count = 16;
    struct Shard {
        mutable std::mutex mutex;
        std::unordered_map<State, int, Hash> map;
    };
    static std::size_t shard_of(const State& s) { return (Hash{}(s) >> 7) % shard_count; }
    std::array<Shard, shard_count> shards_;
};

struct Outcome {
    enum Kind { found, failed, aborted } kind = failed;
    // A depth limit (directly or through a bounded memo entry) influenced
    // the failure, so it does not prove unreachability at larger budgets.
    bool cut = false;
};

template <class Ops>
class Engine {
    using State = typename Ops::State;
    struct StateHash {
        std::size_t operator()(const State& s) const noexcept { return Ops::hash(s); }
    };
    using MemoTable = Memo<State, StateHash>;

public:
    Engine(const ProblemInstance& inst, std::vector<PlanItem> moves, const SearchOptions& opt)
        : inst_(inst), ops_(inst), moves_(std::move(moves)), opt_(opt) {
        monotone_ = std::none_of(moves_.begin(), moves_.end(),
                                 [](const PlanItem& m) { return std::holds_alternative<Change>(m); });
        for (const auto& g : inst.goals)
            if (!g.positive && is_self_evident(g.fluent))
                never_ = true;
        setup_relays();
        setup_progress();
    }

    bool never_satisfiable() const noexcept { return never_; }
    std::uint64_t nodes() const noexcept { return nodes_.load(); }
    bool aborted() const noexcept { return aborted_.load(); }
    const std::vector<PlanItem>& moves() const noexcept { return moves_; }

    /// Plans of length <= limit from the initial state; on success `plan`
    /// holds the move indices.
    Outcome run(int limit, std::vector<int>& plan) {
        const State start = ops_.root();
        if (!tick())
            return {Outcome::aborted, true};
        if (ops_.satisfied(start)) {
            plan.clear();
            return {Outcome::found, false};
        }
        if (limit == 0)
            return {Outcome::failed, true};

        std::vector<State> children;
        std::vector<int> branch;
        for (int m = 0; m < static_cast<int>(moves_.size()); ++m) {
            State child = ops_.step(start, moves_[static_cast<std::size_t>(m)]);
            if ((opt_.prune_noops && child == start) || !advances(start, child))
                continue;
            children.push_back(std::move(child));
            branch.push_back(m);
        }

        const int workers = std::max(1, std::min<int>(opt_.threads, static_cast<int>(children.size())));
        std::vector<Outcome> results(children.size());
        std::vector<std::vector<int>> paths(children.size());
        std::atomic<std::size_t> next{0};
        std::atomic<std::size_t> best{children.size()};
        const auto work = [&] {
            for (;;) {
                const std::size_t k = next.fetch_add(1);
                if (k >= children.size() || k > best.load())
                    return;
                results[k] = dfs(children[k], limit - 1, paths[k]);
                if (results[k].kind == Outcome::found) {
                    std::size_t cur = best.load();
                    while (k < cur && !best.compare_exchange_weak(cur, k)) {
                    }
                }
                if (results[k].kind == Outcome::aborted)
                    return;
            }
        };
        if (workers == 1) {
            work();
        } else {
            std::vector<std::thread> pool;
            for (int w = 0; w < workers; ++w)
                pool.emplace_back(work);
            for (auto& t : pool)
                t.join();
        }

        // The answer is the lowest-index branch that succeeded, provided
        // every branch before it finished.
        bool cut = false;
        for (std::size_t k = 0; k < children.size(); ++k) {
            if (results[k].kind == Outcome::found) {
                plan.clear();
                plan.push_back(branch[k]);
                std::reverse(paths[k].begin(), paths[k].end());
                plan.insert(plan.end(), paths[k].begin(), paths[k].end());
                return {Outcome::found, false};
            }
            if (results[k].kind == Outcome::aborted || aborted())
                return {Outcome::aborted, true};
            cut = cut || results[k].cut;
        }
        if (aborted())
            return {Outcome::aborted, true};
        return {Outcome::failed, cut};
    }

private:
    bool tick() {
        const auto count = nodes_.fetch_add(1, std::memory_order_relaxed) + 1;
        if (opt_.node_budget != 0 && count > opt_.node_budget) {
            aborted_.store(true);
            return false;
        }
        return !aborted_.load(std::memory_order_relaxed);
    }

    // Without changes nothing is ever forgotten, so a true negative goal
    // stays true.
    bool doomed(const State& s) const {
        if (!monotone_)
            return false;
        return ops_.violated(s) || relays_blocked(s);
    }

    // `path` receives move indices in reverse order.
    Outcome dfs(const State& s, int remaining, std::vector<int>& path) {
        if (!tick())
            return {Outcome::aborted, true};
        if (ops_.satisfied(s))
            return {Outcome::found, false};
        if (doomed(s))
            return {Outcome::failed, false};
        if (remaining == 0)
            return {Outcome::failed, true};
        if (opt_.memoize) {
            if (auto known = memo_.find(s); known && *known >= remaining)
                return {Outcome::failed, *known != MemoTable::unbounded};
        }
        bool cut = false;
        const auto visit = [&](const State& child, int m) {
            const Outcome r = dfs(child, remaining - 1, path);
            if (r.kind == Outcome::found)
                path.push_back(m);
            cut = cut || r.cut;
            return r.kind != Outcome::failed ? std::optional<Outcome>(r) : std::nullopt;
        };
        for (int m = 0; m < static_cast<int>(moves_.size()); ++m) {
            State child = ops_.step(s, moves_[static_cast<std::size_t>(m)]);
            if ((opt_.prune_noops && child == s) || !advances(s, child))
                continue;
            if (auto r = visit(child, m))
                return *r;
        }
        cut = cut || !monotone_;
        if (opt_.memoize)
            memo_.raise(s, cut ? remaining : MemoTable::unbounded);
        return {Outcome::failed, cut};
    }

    // Depth-1 relay check. For a pending goal K_t s_j the secret has to be
    // carried from a current knower to t by a chain of calls. Every relay
    // hands t everything it already knows, and a call between u and v is
    // dead for good once either side knows something the other must never
    // learn. If no live chain exists the goal is lost.
    void setup_relays() {
        const int n = inst_.agent_count();
        if (!monotone_ || n > 64)
            return;
        forbidden_.assign(static_cast<std::size_t>(n), 0);
        bool any = false;
        for (const auto& g : inst_.goals) {
            if (g.positive || g.fluent.depth() != 1)
                continue;
            forbidden_[static_cast<std::size_t>(g.fluent.knowers[0] - 1)] |= std::uint64_t{1}
                                                                             << (g.fluent.secret - 1);
            any = true;
        }
        if (!any)
            return;
        for (const auto& g : inst_.goals)
            if (g.positive && g.fluent.depth() == 1 && !is_self_evident(g.fluent))
                pending_.push_back({g.fluent.knowers[0] - 1, g.fluent.secret - 1});
        adjacency_.assign(static_cast<std::size_t>(n), 0);
        for (const auto& [u, v] : inst_.graph.edges()) {
            adjacency_[static_cast<std::size_t>(u - 1)] |= std::uint64_t{1} << (v - 1);
            if (!inst_.graph.directed())
                adjacency_[static_cast<std::size_t>(v - 1)] |= std::uint64_t{1} << (u - 1);
        }
    }

    bool relays_blocked(const State& s) const {
        if (pending_.empty())
            return false;
        const int n = inst_.agent_count();
        const bool two_way = !inst_.graph.directed();
        std::array<std::uint64_t, 64> known{};
        ops_.first_order(s, known.data());
        for (const auto& goal : pending_) {
            if (known[static_cast<std::size_t>(goal.target)] >> goal.secret & 1U)
                continue;
            const std::uint64_t banned = forbidden_[static_cast<std::size_t>(goal.target)];
            std::uint64_t frontier = 0;
            for (int w = 0; w < n; ++w)
                if ((known[static_cast<std::size_t>(w)] >> goal.secret & 1U) &&
                    (known[static_cast<std::size_t>(w)] & banned) == 0)
                    frontier |= std::uint64_t{1} << w;
            std::uint64_t seen = frontier;
            bool reached = false;
            while (frontier != 0 && !reached) {
                std::uint64_t next = 0;
                for (std::uint64_t f = frontier; f != 0 && !reached; f &= f - 1) {
                    const int u = __builtin_ctzll(f);
                    const std::uint64_t ku = known[static_cast<std::size_t>(u)];
                    for (std::uint64_t a = adjacency_[static_cast<std::size_t>(u)] & ~seen; a != 0; a &= a - 1) {
                        const int v = __builtin_ctzll(a);
                        const std::uint64_t kv = known[static_cast<std::size_t>(v)];
                        if (ku & forbidden_[static_cast<std::size_t>(v)])
                            continue;
                        if (two_way && (kv & forbidden_[static_cast<std::size_t>(u)]))
                            continue;
                        if (v == goal.target) {
                            reached = true;
                            break;
                        }
                        if (kv & banned)
                            continue;
                        next |= std::uint64_t{1} << v;
                    }
                }
                seen |= next;
                frontier = next;
            }
            if (!reached)
                return true;
        }
        return false;
    }

    // Without changes, dropping calls from a plan only shrinks first-order
    // knowledge. Keeping just the earliest-arrival chain of each positive
    // goal still works, and on such a chain every call hands a secret to an
    // agent that lacked it while its goal was open. Whatever a relay knows
    // on receipt reaches the target too, so a relay that already knows
    // something the target must not learn does not count.
    void setup_progress() {
        if (!opt_.prune_detours || !monotone_ || inst_.depth_cap != 1 || inst_.agent_count() > 64 ||
            inst_.mode == Mode::parallel)
            return;
        for (const auto& g : inst_.goals)
            if (g.positive && !is_self_evident(g.fluent))
                targets_.push_back({g.fluent.knowers[0] - 1, g.fluent.secret - 1});
        progress_ = true;
    }

    bool advances(const State& before, const State& after) const {
        if (!progress_)
            return true;
        const int n = inst_.agent_count();
        std::array<std::uint64_t, 64> was{};
        std::array<std::uint64_t, 64> now{};
        ops_.first_order(before, was.data());
        ops_.first_order(after, now.data());
        for (const auto& g : targets_) {
            const auto t = static_cast<std::size_t>(g.target);
            if (was[t] >> g.secret & 1U)
                continue;
            for (int w = 0; w < n; ++w) {
                const auto k = static_cast<std::size_t>(w);
                if (((now[k] & ~was[k]) >> g.secret & 1U) && (k == t || (now[k] & forbidden_[t]) == 0))
                    return true;
            }
        }
        return false;
    }

    struct Pending {
        int target;
        int secret;
    };

    const ProblemInstance& inst_;
    Ops ops_;
    std::vector<PlanItem> moves_;
    SearchOptions opt_;
    bool monotone_ = true;
    bool never_ = false;
    std::vector<std::uint64_t> forbidden_;
    std::vector<std::uint64_t> adjacency_;
    std::vector<Pending> pending_;
    std::vector<Pending> targets_;
    bool progress_ = false;
    MemoTable memo_;
    std::atomic<std::uint64_t> nodes_{0};
    std::atomic<bool> aborted_{false};
};

std::tuple<AgentId, AgentId, int, AgentId> move_key(const PlanItem& m) {
    if (const auto* c = std::get_if<TwoWayCall>(&m))
        return {std::min(c->i, c->j), std::max(c->i, c->j), 0, 0};
    if (const auto* c = std::get_if<OneWayCall>(&m))
        return {std::min(c->from, c->to), std::max(c->from, c->to), 1, c->from};
    if (const auto* c = std::get_if<Change>(&m))
        return {c->agent, c->agent, 2, 0};
    return {0, 0, 3, 0};
}

std::vector<PlanItem> sequential_moves(const ProblemInstance& inst) {
    std::vector<PlanItem> moves;
    for (const auto& [u, v] : inst.graph.edges()) {
        if (inst.mode == Mode::one_way)
            moves.emplace_back(OneWayCall{u, v});
        else
            moves.emplace_back(TwoWayCall{u, v});
    }
    if (inst.allow_change)
        for (AgentId a = 1; a <= inst.agent_count(); ++a)
            moves.emplace_back(Change{a});
    std::stable_sort(moves.begin(), moves.end(),
                     [](const PlanItem& a, const PlanItem& b) { return move_key(a) < move_key(b); });
    return moves;
}

void matchings(const std::vector<std::pair<AgentId, AgentId>>& edges, std::size_t from, std::uint64_t used,
               std::vector<TwoWayCall>& cur, std::vector<ParallelStep>& out) {
    for (std::size_t k = from; k < edges.size(); ++k) {
        const auto [u, v] = edges[k];
        const std::uint64_t bits = (std::uint64_t{1} << u) | (std::uint64_t{1} << v);
        if (used & bits)
            continue;
        cur.push_back(TwoWayCall{u, v});
        out.push_back(ParallelStep{cur});
        matchings(edges, k + 1, used | bits, cur, out);
        cur.pop_back();
    }
}

std::vector<PlanItem> step_moves(const ProblemInstance& inst) {
    if (inst.agent_count() > 62)
        throw std::invalid_argument("matching enumeration supports at most 62 agents");
    std::vector<std::pair<AgentId, AgentId>> edges(inst.graph.edges().begin(), inst.graph.edges().end());
    std::vector<ParallelStep> steps;
    std::vector<TwoWayCall> cur;
    matchings(edges, 0, 0, cur, steps);
    std::sort(steps.begin(), steps.end(), [](const ParallelStep& a, const ParallelStep& b) {
        return std::lexicographical_compare(a.calls.begin(), a.calls.end(), b.calls.begin(), b.calls.end(),
                                            [](const TwoWayCall& x, const TwoWayCall& y) {
                                                return std::tie(x.i, x.j) < std::tie(y.i, y.j);
                                            });
    });
    std::vector<PlanItem> moves(steps.begin(), steps.end());
    if (inst.allow_change)
        for (AgentId a = 1; a <= inst.agent_count(); ++a)
            moves.emplace_back(Change{a});
    return moves;
}

Plan to_plan(const ProblemInstance& inst, const std::vector<PlanItem>& moves, const std::vector<int>& indices) {
    Plan plan;
    plan.mode = inst.mode;
    for (int m : indices)
        plan.items.push_back(moves[static_cast<std::size_t>(m)]);
    return plan;
}

template <class Ops>
SearchResult deepen(const ProblemInstance& inst, std::vector<PlanItem> moves, int max_len, const SearchOptions& opt) {
    Engine<Ops> engine(inst, std::move(moves), opt);
    SearchResult res;
    res.bound = max_len;
    if (engine.never_satisfiable()) {
        res.status = SearchStatus::proven_absent;
        res.exhausted_length = max_len;
        return res;
    }
    std::vector<int> indices;
    for (int len = 0; len <= max_len; ++len) {
        const Outcome out = engine.run(len, indices);
        res.nodes = engine.nodes();
        if (out.kind == Outcome::found) {
            res.status = SearchStatus::found;
            res.plan = to_plan(inst, engine.moves(), indices);
            res.exhausted_length = static_cast<int>(indices.size()) - 1;
            return res;
        }
        if (out.kind == Outcome::aborted) {
            res.status = SearchStatus::budget_exhausted;
            return res;
        }
        res.exhausted_length = len;
        if (!out.cut) {
            res.exhausted_length = max_len;
            break;
        }
    }
    res.status = SearchStatus::proven_absent;
    return res;
}

// One depth-first pass with the full bound as the limit.
template <class Ops>
SearchResult single_pass(const ProblemInstance& inst, std::vector<PlanItem> moves, int bound,
                         const SearchOptions& opt) {
    Engine<Ops> engine(inst, std::move(moves), opt);
    SearchResult res;
    res.bound = bound;
    std::vector<int> indices;
    const Outcome out = engine.never_satisfiable() ? Outcome{Outcome::failed, false} : engine.run(bound, indices);
    res.nodes = engine.nodes();
    if (out.kind == Outcome::aborted) {
        res.status = SearchStatus::budget_exhausted;
    } else if (out.kind == Outcome::failed) {
        res.status = SearchStatus::proven_absent;
        res.exhausted_length = bound;
    } else {
        res.status = SearchStatus::found;
        res.plan = to_plan(inst, engine.moves(), indices);
    }
    return res;
}

bool use_compact(const ProblemInstance& inst, const SearchOptions& opt) {
    return opt.compact_states && FirstOrderOps::applicable(inst);
}

SearchResult deepen_any(const ProblemInstance& inst, std::vector<PlanItem> moves, int max_len,
                        const SearchOptions& opt) {
    if (max_len < 0)
        throw std::invalid_argument("length limit must be >= 0");
    if (use_compact(inst, opt))
        return deepen<FirstOrderOps>(inst, std::move(moves), max_len, opt);
    return deepen<DenseOps>(inst, std::move(moves), max_len, opt);
}

} // namespace

SearchResult search_optimal(const ProblemInstance& instance, int max_len, const SearchOptions& options) {
    instance.validate();
    if (instance.mode == Mode::parallel)
        throw std::invalid_argument("search_optimal needs a sequential mode; use min_parallel_steps");
    return deepen_any(instance, sequential_moves(instance), max_len, options);
}

SearchResult min_parallel_steps(const ProblemInstance& instance, int max_steps, const SearchOptions& options) {
    instance.validate();
    if (instance.mode != Mode::parallel)
        throw std::invalid_argument("min_parallel_steps needs parallel mode");
    return deepen_any(instance, step_moves(instance), max_steps, options);
}

SearchResult solve_neg(const ProblemInstance& instance, const NegOptions& options) {
    instance.validate();
    const long long raw = negative_goal_bound(instance);
    const int bound = static_cast<int>(std::min<long long>(raw, INT_MAX / 2));
    auto moves = instance.mode == Mode::parallel ? step_moves(instance) : sequential_moves(instance);

    if (quick_infeasible(instance)) {
        SearchResult res;
        res.status = SearchStatus::proven_absent;
        res.bound = bound;
        res.exhausted_length = bound;
        return res;
    }
    if (options.shortest) {
        SearchResult res = deepen_any(instance, std::move(moves), bound, options.search);
        res.bound = bound;
        return res;
    }

    SearchResult res = use_compact(instance, options.search)
                           ? single_pass<FirstOrderOps>(instance, std::move(moves), bound, options.search)
                           : single_pass<DenseOps>(instance, std::move(moves), bound, options.search);
    if (res.status != SearchStatus::found)
        return res;

    // Drop items one at a time while the plan still works.
    Plan& plan = *res.plan;
    for (bool shrunk = true; shrunk;) {
        shrunk = false;
        for (std::size_t k = 0; k < plan.items.size(); ++k) {
            Plan shorter = plan;
            shorter.items.erase(shorter.items.begin() + static_cast<std::ptrdiff_t>(k));
            if (verify(instance, shorter).success) {
                plan = std::move(shorter);
                shrunk = true;
                break;
            }
        }
    }
    return res;
}

std::pair<ProblemInstance, Plan> hierarchy_demo(const std::map<AgentId, int>& levels) {
    if (levels.empty())
        throw std::invalid_argument("hierarchy needs at least one agent");
    const int n = static_cast<int>(levels.size());
    if (levels.begin()->first != 1 || levels.rbegin()->first != n)
        throw std::invalid_argument("hierarchy agents must be numbered 1..n");

    std::map<int, std::vector<AgentId>> by_level;
    for (const auto& [agent, level] : levels)
        by_level[level].push_back(agent);

    ProblemInstance inst;
    inst.graph = CommGraph(n, false);
    inst.mode = Mode::two_way;
    inst.depth_cap = 1;
    inst.allow_change = true;

    Plan plan;
    plan.mode = Mode::two_way;
    for (auto it = by_level.begin(); it != by_level.end(); ++it) {
        auto up = std::next(it);
        if (up == by_level.end())
            break;
        for (AgentId u : it->second)
            for (AgentId w : up->second) {
                inst.graph.add_edge(u, w);
                plan.items.emplace_back(TwoWayCall{u, w});
            }
        for (AgentId w : up->second)
            plan.items.emplace_back(Change{w});
    }
    for (const auto& [i, li] : levels)
        for (const auto& [j, lj] : levels)
            if (li < lj) {
                inst.goals.push_back(SignedGoal{true, Fluent{{j}, i}});
                inst.goals.push_back(SignedGoal{false, Fluent{{i}, j}});
            }
    return {std::move(inst), std::move(plan)};
}

} // namespace epigossip
