#pragma once

#include "epigossip/fluent.hpp"

#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <utility>
#include <vector>

namespace epigossip {

/// Dense numbering of the canonical, non-self-evident fluents of an
/// n-agent system up to a depth cap.
///
/// Such a fluent of depth r is exactly a sequence e_0..e_r of agents with
/// no two consecutive entries equal (knowers followed by the secret owner).
/// Within a depth block the sequence is written in a mixed radix: e_0 in
/// base n, every later entry as its rank among the n-1 agents that differ
/// from its predecessor. Depth-0 "codes" are the 0-based agent index.
///
/// All agent arguments here are 0-based.
class FluentIndexer {
public:
    FluentIndexer(int n, int depth_cap);

    int agent_count() const noexcept { return n_; }
    int depth_cap() const noexcept { return cap_; }
    std::size_t size() const noexcept { return offset_.back(); }

    /// Number of codes in one leading-agent slice of the depth-r block.
    std::uint64_t slice(int r) const noexcept { return pow_[static_cast<std::size_t>(r)]; }
    std::size_t offset(int r) const noexcept { return offset_[static_cast<std::size_t>(r - 1)]; }

    int head(std::uint64_t code, int r) const noexcept {
        return static_cast<int>(code / pow_[static_cast<std::size_t>(r)]);
    }

    /// Drops the outermost knower of a depth-r code (r >= 1); returns the
    /// depth r-1 code.
    std::uint64_t tail(std::uint64_t code, int r) const noexcept {
        const auto p = pow_[static_cast<std::size_t>(r - 1)];
        const int h = head(code, r);
        const int digit = static_cast<int>((code / p) % static_cast<std::uint64_t>(n_ - 1));
        const int second = digit < h ? digit : digit + 1;
        return static_cast<std::uint64_t>(second) * p + code % p;
    }

    /// Code of x :: (depth-r code). Requires head(code) != x.
    std::uint64_t prepend(int x, std::uint64_t code, int r) const noexcept {
        const auto p = pow_[static_cast<std::size_t>(r)];
        const int h = static_cast<int>(code / p);
        const int rel = h < x ? h : h - 1;
        return static_cast<std::uint64_t>(x) * pow_[static_cast<std::size_t>(r + 1)] +
               static_cast<std::uint64_t>(rel) * p + code % p;
    }

    /// Encodes a canonical non-self-evident fluent (1-based ids) of depth
    /// 1..cap; returns its global bit index.
    std::size_t index_of(const Fluent& f) const;

    /// Inverse of index_of.
    Fluent fluent_at(std::size_t index) const;

    /// Depth of the block a global index falls into.
    int depth_of(std::size_t index) const noexcept;

    /// 0-based secret owner (last sequence entry) of a depth-r code.
    int secret_of_code(std::uint64_t code, int r) const noexcept;

    /// Shared instance for (n, cap); thread-safe.
    static std::shared_ptr<const FluentIndexer> get(int n, int depth_cap);

private:
    int n_;
    int cap_;
    std::vector<std::uint64_t> pow_;  // (n-1)^k, k = 0..cap+1
    std::vector<std::size_t> offset_; // offset_[r-1] = start of depth-r block; back() = total
};

/// The set of true, non-self-evident, canonical fluents of depth 1..cap.
/// Values are immutable in effect: every operation returns a new state.
class KnowledgeState {
public:
    KnowledgeState(int n, int depth_cap);

    int agent_count() const noexcept { return indexer_->agent_count(); }
    int depth_cap() const noexcept { return indexer_->depth_cap(); }
    const FluentIndexer& indexer() const noexcept { return *indexer_; }

    /// Bare secrets and self-evident fluents are always true. Throws
    /// DepthOverflowError if the canonical depth exceeds the cap, and
    /// std::out_of_range for agent ids outside 1..n.
    bool is_true(const Fluent& f) const;

    /// is_true(K_a f).
    bool knows(AgentId a, const Fluent& f) const;

    std::vector<Fluent> truths() const;
    std::size_t truth_count() const noexcept;
    bool empty() const noexcept { return truth_count() == 0; }

    /// Same truths with everything deeper than `cap` dropped.
    KnowledgeState truncated(int cap) const;

    /// Truths of this state include all truths of `other` (same n and cap).
    bool includes(const KnowledgeState& other) const;

    std::span<const std::uint64_t> words() const noexcept { return bits_; }
    bool test_bit(std::size_t index) const noexcept {
        return (bits_[index >> 6] >> (index & 63)) & 1U;
    }

    /// Inserts a fluent directly. Intended for tests and tools that build
    /// arbitrary (possibly unreachable) states; self-evident input is ignored.
    void insert(const Fluent& f);

    /// Keeps only the bits also set in `mask` (same word count).
    void intersect_with(std::span<const std::uint64_t> mask) noexcept {
        for (std::size_t k = 0; k < bits_.size() && k < mask.size(); ++k)
            bits_[k] &= mask[k];
    }

    std::size_t hash() const noexcept;

    bool operator==(const KnowledgeState& other) const noexcept;

    friend KnowledgeState apply_two_way(const KnowledgeState&, AgentId, AgentId);
    friend KnowledgeState apply_one_way(const KnowledgeState&, AgentId, AgentId);
    friend KnowledgeState apply_change(const KnowledgeState&, AgentId);

private:
    void set_bit(std::size_t index) noexcept { bits_[index >> 6] |= std::uint64_t{1} << (index & 63); }
    void clear_bit(std::size_t index) noexcept { bits_[index >> 6] &= ~(std::uint64_t{1} << (index & 63)); }
    bool code_true(std::uint64_t code, int r) const noexcept {
        return r == 0 || test_bit(indexer_->offset(r) + code);
    }
    void check_agent(AgentId a) const;

    std::shared_ptr<const FluentIndexer> indexer_;
    std::vector<std::uint64_t> bits_;
};

/// Every agent knows only its own secret; nothing is stored.
KnowledgeState initial_state(int n, int depth_cap);

bool is_true(const KnowledgeState& st, const Fluent& f);
bool knows(const KnowledgeState& st, AgentId a, const Fluent& f);

/// Two-way call: i and j pool their knowledge and both know it was pooled,
/// to any nesting over {i, j} that fits under the cap.
KnowledgeState apply_two_way(const KnowledgeState& st, AgentId i, AgentId j);

/// One-way call: `to` learns K_to f for every f the sender knows; the
/// sender learns nothing.
KnowledgeState apply_one_way(const KnowledgeState& st, AgentId from, AgentId to);

/// Agent i replaces its secret: every stored fluent about s_i is dropped.
KnowledgeState apply_change(const KnowledgeState& st, AgentId i);

} // namespace epigossip

template <>
struct std::hash<epigossip::KnowledgeState> {
    std::size_t operator()(const epigossip::KnowledgeState& s) const noexcept { return s.hash(); }
};
