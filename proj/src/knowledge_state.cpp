#include "epigossip/knowledge_state.hpp"

#include "epigossip/error.hpp"

#include <bit>
#include <limits>
#include <map>
#include <mutex>
#include <stdexcept>
#include <string>

namespace epigossip {

namespace {

constexpr std::size_t max_fluent_bits = std::size_t{1} << 32;

} // namespace

FluentIndexer::FluentIndexer(int n, int depth_cap) : n_(n), cap_(depth_cap) {
    if (n < 1)
        throw std::invalid_argument("agent count must be >= 1");
    if (depth_cap < 1)
        throw std::invalid_argument("depth cap must be >= 1");

    const auto m = static_cast<std::uint64_t>(n - 1);
    pow_.assign(static_cast<std::size_t>(depth_cap) + 2, 1);
    for (std::size_t k = 1; k < pow_.size(); ++k) {
        if (m != 0 && pow_[k - 1] > std::numeric_limits<std::uint64_t>::max() / m)
            throw std::length_error("fluent space too large");
        pow_[k] = pow_[k - 1] * m;
    }

    offset_.assign(static_cast<std::size_t>(depth_cap) + 1, 0);
    for (int r = 1; r <= depth_cap; ++r) {
        const std::uint64_t block = static_cast<std::uint64_t>(n) * pow_[static_cast<std::size_t>(r)];
        const std::uint64_t next = offset_[static_cast<std::size_t>(r - 1)] + block;
        if (next > max_fluent_bits)
            throw std::length_error("fluent space too large: n=" + std::to_string(n) +
                                    " depth cap=" + std::to_string(depth_cap));
        offset_[static_cast<std::size_t>(r)] = static_cast<std::size_t>(next);
    }
}

std::size_t FluentIndexer::index_of(const Fluent& f) const {
    const int r = static_cast<int>(f.depth());
    std::uint64_t code = static_cast<std::uint64_t>(f.knowers[0] - 1) * pow_[static_cast<std::size_t>(r)];
    int prev = f.knowers[0] - 1;
    for (int m = 1; m <= r; ++m) {
        const int e = (m < r ? f.knowers[static_cast<std::size_t>(m)] : f.secret) - 1;
        const int rel = e < prev ? e : e - 1;
        code += static_cast<std::uint64_t>(rel) * pow_[static_cast<std::size_t>(r - m)];
        prev = e;
    }
    return offset(r) + static_cast<std::size_t>(code);
}

int FluentIndexer::depth_of(std::size_t index) const noexcept {
    int r = 1;
    while (r < cap_ && index >= offset_[static_cast<std::size_t>(r)])
        ++r;
    return r;
}

Fluent FluentIndexer::fluent_at(std::size_t index) const {
    const int r = depth_of(index);
    const std::uint64_t code = index - offset(r);
    Fluent f;
    int e = head(code, r);
    f.knowers.push_back(e + 1);
    for (int m = 1; m <= r; ++m) {
        const auto digit = static_cast<int>((code / pow_[static_cast<std::size_t>(r - m)]) %
                                            static_cast<std::uint64_t>(n_ - 1));
        e = digit < e ? digit : digit + 1;
        if (m < r)
            f.knowers.push_back(e + 1);
    }
    f.secret = e + 1;
    return f;
}

int FluentIndexer::secret_of_code(std::uint64_t code, int r) const noexcept {
    int e = head(code, r);
    for (int m = 1; m <= r; ++m) {
        const auto digit = static_cast<int>((code / pow_[static_cast<std::size_t>(r - m)]) %
                                            static_cast<std::uint64_t>(n_ - 1));
        e = digit < e ? digit : digit + 1;
    }
    return e;
}

std::shared_ptr<const FluentIndexer> FluentIndexer::get(int n, int depth_cap) {
    static std::mutex mutex;
    static std::map<std::pair<int, int>, std::shared_ptr<const FluentIndexer>> cache;
    std::lock_guard lock(mutex);
    auto& slot = cache[{n, depth_cap}];
    if (!slot)
        slot = std::make_shared<const FluentIndexer>(n, depth_cap);
    return slot;
}

KnowledgeState::KnowledgeState(int n, int depth_cap)
    : indexer_(FluentIndexer::get(n, depth_cap)), bits_((indexer_->size() + 63) / 64, 0) {}

void KnowledgeState::check_agent(AgentId a) const {
    if (a < 1 || a > agent_count())
        throw std::out_of_range("agent " + std::to_string(a) + " outside 1.." +
                                std::to_string(agent_count()));
}

bool KnowledgeState::is_true(const Fluent& f) const {
    for (AgentId k : f.knowers)
        check_agent(k);
    check_agent(f.secret);
    if (f.depth() == 0)
        return true;
    const Fluent c = canonicalize(f);
    if (static_cast<int>(c.depth()) > depth_cap())
        throw DepthOverflowError("query " + to_string(f) + " has depth " + std::to_string(c.depth()) +
                                 " but the state tracks depth " + std::to_string(depth_cap()));
    if (is_self_evident(c))
        return true;
    return test_bit(indexer_->index_of(c));
}

bool KnowledgeState::knows(AgentId a, const Fluent& f) const {
    return is_true(prepend(a, f));
}

void KnowledgeState::insert(const Fluent& f) {
    const Fluent c = canonicalize(f);
    if (c.depth() == 0)
        return;
    is_true(c); // range and depth checks
    if (is_self_evident(c))
        return;
    set_bit(indexer_->index_of(c));
}

std::vector<Fluent> KnowledgeState::truths() const {
    std::vector<Fluent> out;
    for (std::size_t w = 0; w < bits_.size(); ++w) {
        std::uint64_t word = bits_[w];
        while (word != 0) {
            const int b = std::countr_zero(word);
            word &= word - 1;
            out.push_back(indexer_->fluent_at(w * 64 + static_cast<std::size_t>(b)));
        }
    }
    return out;
}

std::size_t KnowledgeState::truth_count() const noexcept {
    std::size_t c = 0;
    for (auto w : bits_)
        c += static_cast<std::size_t>(std::popcount(w));
    return c;
}

KnowledgeState KnowledgeState::truncated(int cap) const {
    if (cap < 1 || cap > depth_cap())
        throw std::invalid_argument("truncated: cap must be in 1.." + std::to_string(depth_cap()));
    KnowledgeState out(agent_count(), cap);
    // Depth blocks are laid out in increasing depth and do not depend on the cap.
    const std::size_t limit = out.indexer_->size();
    for (std::size_t w = 0; w < out.bits_.size(); ++w)
        out.bits_[w] = bits_[w];
    if (limit % 64 != 0 && !out.bits_.empty())
        out.bits_.back() &= (std::uint64_t{1} << (limit % 64)) - 1;
    return out;
}

bool KnowledgeState::includes(const KnowledgeState& other) const {
    if (other.agent_count() != agent_count() || other.depth_cap() != depth_cap())
        throw std::invalid_argument("includes: states of different shape");
    for (std::size_t w = 0; w < bits_.size(); ++w)
        if ((other.bits_[w] & ~bits_[w]) != 0)
            return false;
    return true;
}

std::size_t KnowledgeState::hash() const noexcept {
    std::uint64_t h = 0xcbf29ce484222325ULL ^ static_cast<std::uint64_t>(agent_count() * 131 + depth_cap());
    for (auto w : bits_) {
        h ^= w + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    }
    return static_cast<std::size_t>(h);
}

bool KnowledgeState::operator==(const KnowledgeState& other) const noexcept {
    return indexer_ == other.indexer_ && bits_ == other.bits_;
}

KnowledgeState initial_state(int n, int depth_cap) {
    return KnowledgeState(n, depth_cap);
}

bool is_true(const KnowledgeState& st, const Fluent& f) {
    return st.is_true(f);
}

bool knows(const KnowledgeState& st, AgentId a, const Fluent& f) {
    return st.knows(a, f);
}

// For g = x :: tail with x in {i, j}, the call makes g true iff
//   * tail starts with the other caller and tail became true in this call
//     (nested alternations over {i, j} collapse onto the shorter fluent), or
//   * the other caller knew tail (K_x tail itself is g), or
//   * the other caller knew g and g sits below the cap.
// Depths are processed in increasing order so the first case can read the
// already-updated shallower fluent.
KnowledgeState apply_two_way(const KnowledgeState& st, AgentId i1, AgentId j1) {
    st.check_agent(i1);
    st.check_agent(j1);
    if (i1 == j1)
        throw std::invalid_argument("two-way call needs distinct agents");

    const FluentIndexer& ix = *st.indexer_;
    const int cap = ix.depth_cap();
    const int i = i1 - 1;
    const int j = j1 - 1;
    KnowledgeState out = st;

    for (int r = 1; r <= cap; ++r) {
        const std::size_t off = ix.offset(r);
        const std::uint64_t slice = ix.slice(r);
        for (int x : {i, j}) {
            const int other = x == i ? j : i;
            const std::uint64_t base = static_cast<std::uint64_t>(x) * slice;
            for (std::uint64_t local = 0; local < slice; ++local) {
                const std::uint64_t code = base + local;
                if (st.test_bit(off + code))
                    continue;
                const std::uint64_t tl = ix.tail(code, r);
                const int second = ix.head(tl, r - 1);
                bool now_true;
                if (second == other)
                    now_true = r == 1 || out.test_bit(ix.offset(r - 1) + tl);
                else
                    now_true = st.code_true(ix.prepend(other, tl, r - 1), r);
                if (!now_true && r < cap)
                    now_true = st.test_bit(ix.offset(r + 1) + ix.prepend(other, code, r));
                if (now_true)
                    out.set_bit(off + code);
            }
        }
    }
    return out;
}

KnowledgeState apply_one_way(const KnowledgeState& st, AgentId from1, AgentId to1) {
    st.check_agent(from1);
    st.check_agent(to1);
    if (from1 == to1)
        throw std::invalid_argument("one-way call needs distinct agents");

    const FluentIndexer& ix = *st.indexer_;
    const int cap = ix.depth_cap();
    const int from = from1 - 1;
    const int to = to1 - 1;
    KnowledgeState out = st;

    for (int r = 1; r <= cap; ++r) {
        const std::size_t off = ix.offset(r);
        const std::uint64_t slice = ix.slice(r);
        const std::uint64_t base = static_cast<std::uint64_t>(to) * slice;
        for (std::uint64_t local = 0; local < slice; ++local) {
            const std::uint64_t code = base + local;
            if (st.test_bit(off + code))
                continue;
            const std::uint64_t tl = ix.tail(code, r);
            const int second = ix.head(tl, r - 1);
            // K_from tail; when tail already starts with `from` that is tail itself.
            bool now_true = second == from ? st.code_true(tl, r - 1)
                                           : st.code_true(ix.prepend(from, tl, r - 1), r);
            if (!now_true && r < cap)
                now_true = st.test_bit(ix.offset(r + 1) + ix.prepend(from, code, r));
            if (now_true)
                out.set_bit(off + code);
        }
    }
    return out;
}

KnowledgeState apply_change(const KnowledgeState& st, AgentId i1) {
    st.check_agent(i1);
    const FluentIndexer& ix = *st.indexer_;
    const int i = i1 - 1;
    KnowledgeState out = st;
    for (std::size_t w = 0; w < st.bits_.size(); ++w) {
        std::uint64_t word = st.bits_[w];
        while (word != 0) {
            const int b = std::countr_zero(word);
            word &= word - 1;
            const std::size_t index = w * 64 + static_cast<std::size_t>(b);
            const int r = ix.depth_of(index);
            if (ix.secret_of_code(index - ix.offset(r), r) == i)
                out.clear_bit(index);
        }
    }
    return out;
}

} // namespace epigossip
