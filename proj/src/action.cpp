#include "epigossip/action.hpp"

#include <stdexcept>

namespace epigossip {

std::string_view to_string(Mode m) noexcept {
    switch (m) {
    case Mode::two_way:
        return "two-way";
    case Mode::one_way:
        return "one-way";
    case Mode::parallel:
        return "parallel";
    }
    return "?";
}

std::optional<Mode> parse_mode(std::string_view s) noexcept {
    if (s == "two-way")
        return Mode::two_way;
    if (s == "one-way")
        return Mode::one_way;
    if (s == "parallel")
        return Mode::parallel;
    return std::nullopt;
}

namespace {

struct ItemPrinter {
    std::string operator()(const TwoWayCall& c) const {
        return "call " + std::to_string(c.i) + " " + std::to_string(c.j);
    }
    std::string operator()(const OneWayCall& c) const {
        return "send " + std::to_string(c.from) + " " + std::to_string(c.to);
    }
    std::string operator()(const Change& c) const { return "change " + std::to_string(c.agent); }
    std::string operator()(const ParallelStep& s) const {
        std::string out = "step";
        for (std::size_t k = 0; k < s.calls.size(); ++k) {
            out += k == 0 ? " " : "; ";
            out += (*this)(s.calls[k]);
        }
        return out;
    }
};

} // namespace

std::string to_string(const PlanItem& item) {
    return std::visit(ItemPrinter{}, item);
}

void check_disjoint(const ParallelStep& step, int n) {
    std::vector<bool> busy(static_cast<std::size_t>(n) + 1, false);
    for (const auto& c : step.calls) {
        for (AgentId a : {c.i, c.j}) {
            if (a < 1 || a > n)
                throw std::out_of_range("agent " + std::to_string(a) + " outside 1.." + std::to_string(n));
            if (busy[static_cast<std::size_t>(a)])
                throw std::invalid_argument("agent " + std::to_string(a) +
                                            " appears in two calls of the same step");
            busy[static_cast<std::size_t>(a)] = true;
        }
    }
}

KnowledgeState apply_parallel_step(const KnowledgeState& st, const ParallelStep& step) {
    check_disjoint(step, st.agent_count());
    KnowledgeState out = st;
    for (const auto& c : step.calls)
        out = apply_two_way(out, c.i, c.j);
    return out;
}

KnowledgeState apply_item(const KnowledgeState& st, const PlanItem& item) {
    struct Visitor {
        const KnowledgeState& st;
        KnowledgeState operator()(const TwoWayCall& c) const { return apply_two_way(st, c.i, c.j); }
        KnowledgeState operator()(const OneWayCall& c) const { return apply_one_way(st, c.from, c.to); }
        KnowledgeState operator()(const Change& c) const { return apply_change(st, c.agent); }
        KnowledgeState operator()(const ParallelStep& s) const { return apply_parallel_step(st, s); }
    };
    return std::visit(Visitor{st}, item);
}

} // namespace epigossip
