#include "epigossip/io.hpp"

#include "epigossip/error.hpp"
#include "epigossip/planner.hpp"

#include <algorithm>
#include <charconv>
#include <set>

namespace epigossip {

namespace {

struct Token {
    std::string_view text;
    int column = 0;
};

struct Line {
    int number = 0;
    std::vector<Token> tokens;
};

// Splits into whitespace-separated tokens, dropping `#` comments.
std::vector<Line> tokenize(std::string_view text) {
    std::vector<Line> lines;
    int number = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t end = text.find('\n', pos);
        if (end == std::string_view::npos)
            end = text.size();
        std::string_view raw = text.substr(pos, end - pos);
        pos = end + 1;
        ++number;
        if (auto hash = raw.find('#'); hash != std::string_view::npos)
            raw = raw.substr(0, hash);
        Line line{number, {}};
        std::size_t k = 0;
        while (k < raw.size()) {
            while (k < raw.size() && (raw[k] == ' ' || raw[k] == '\t' || raw[k] == '\r'))
                ++k;
            const std::size_t start = k;
            while (k < raw.size() && raw[k] != ' ' && raw[k] != '\t' && raw[k] != '\r')
                ++k;
            if (k > start)
                line.tokens.push_back(Token{raw.substr(start, k - start), static_cast<int>(start) + 1});
        }
        if (!line.tokens.empty())
            lines.push_back(std::move(line));
    }
    return lines;
}

long long to_int(const Line& line, const Token& t) {
    long long v = 0;
    const auto* first = t.text.data();
    const auto* last = first + t.text.size();
    auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc{} || ptr != last)
        throw ParseError(line.number, t.column, "expected an integer, got '" + std::string(t.text) + "'");
    return v;
}

void expect_count(const Line& line, std::size_t count, const char* usage) {
    if (line.tokens.size() != count) {
        const int col = line.tokens.size() > count ? line.tokens[count].column : line.tokens.back().column;
        throw ParseError(line.number, col, std::string("expected '") + usage + "'");
    }
}

} // namespace

ProblemInstance parse_problem(std::string_view text) {
    const auto lines = tokenize(text);
    std::optional<int> n;
    std::optional<Mode> mode;
    std::optional<int> depth;
    std::optional<bool> change;
    std::optional<int> depth_line;
    std::vector<std::pair<AgentId, AgentId>> edges;
    std::vector<SignedGoal> goals;
    std::vector<const Line*> goal_origin;
    std::set<SignedGoal> seen_goals;
    bool saw_edge = false;

    const auto need_agents = [&](const Line& line) {
        if (!n)
            throw ParseError(line.number, line.tokens[0].column, "'agents' must come first");
    };
    const auto agent = [&](const Line& line, const Token& t) {
        const long long v = to_int(line, t);
        if (v < 1 || v > *n)
            throw ParseError(line.number, t.column,
                             "agent " + std::string(t.text) + " outside 1.." + std::to_string(*n));
        return static_cast<AgentId>(v);
    };

    for (const auto& line : lines) {
        const auto& head = line.tokens[0];
        const std::string_view word = head.text;
        if (word == "agents") {
            expect_count(line, 2, "agents N");
            if (n)
                throw ParseError(line.number, head.column, "duplicate 'agents'");
            const long long v = to_int(line, line.tokens[1]);
            if (v < 1 || v > 1'000'000)
                throw ParseError(line.number, line.tokens[1].column, "agent count must be in 1..1000000");
            n = static_cast<int>(v);
        } else if (word == "mode") {
            expect_count(line, 2, "mode two-way|one-way|parallel");
            if (mode)
                throw ParseError(line.number, head.column, "duplicate 'mode'");
            if (saw_edge)
                throw ParseError(line.number, head.column, "'mode' after edges: edge direction is already fixed");
            mode = parse_mode(line.tokens[1].text);
            if (!mode)
                throw ParseError(line.number, line.tokens[1].column,
                                 "unknown mode '" + std::string(line.tokens[1].text) + "'");
        } else if (word == "depth") {
            expect_count(line, 2, "depth D");
            if (depth)
                throw ParseError(line.number, head.column, "duplicate 'depth'");
            const long long v = to_int(line, line.tokens[1]);
            if (v < 1 || v > 64)
                throw ParseError(line.number, line.tokens[1].column, "depth must be in 1..64");
            depth = static_cast<int>(v);
            depth_line = line.number;
        } else if (word == "change") {
            expect_count(line, 2, "change on|off");
            if (change)
                throw ParseError(line.number, head.column, "duplicate 'change'");
            if (line.tokens[1].text == "on")
                change = true;
            else if (line.tokens[1].text == "off")
                change = false;
            else
                throw ParseError(line.number, line.tokens[1].column, "expected 'on' or 'off'");
        } else if (word == "edge") {
            expect_count(line, 3, "edge I J");
            need_agents(line);
            const AgentId u = agent(line, line.tokens[1]);
            const AgentId v = agent(line, line.tokens[2]);
            if (u == v)
                throw ParseError(line.number, line.tokens[2].column, "self-loop on agent " + std::to_string(u));
            saw_edge = true;
            edges.emplace_back(u, v);
        } else if (word == "goal") {
            need_agents(line);
            if (line.tokens.size() < 4)
                throw ParseError(line.number, head.column, "expected 'goal +|- A1 .. Ak S' with k >= 1");
            const auto sign = line.tokens[1].text;
            if (sign != "+" && sign != "-")
                throw ParseError(line.number, line.tokens[1].column, "goal sign must be '+' or '-'");
            Fluent f;
            for (std::size_t k = 2; k + 1 < line.tokens.size(); ++k)
                f.knowers.push_back(agent(line, line.tokens[k]));
            f.secret = agent(line, line.tokens.back());
            f = canonicalize(std::move(f));
            SignedGoal g{sign == "+", std::move(f)};
            if (!g.positive && is_self_evident(g.fluent))
                throw ParseError(line.number, line.tokens[1].column,
                                 "negative goal on self-evident fluent " + to_string(g.fluent));
            if (seen_goals.insert(g).second) {
                goals.push_back(std::move(g));
                goal_origin.push_back(&line);
            }
        } else if (word == "goal-all-depth") {
            expect_count(line, 2, "goal-all-depth D");
            need_agents(line);
            const long long d = to_int(line, line.tokens[1]);
            if (d < 1 || d > 64)
                throw ParseError(line.number, line.tokens[1].column, "depth must be in 1..64");
            for (auto& g : goal_T(*n, static_cast<int>(d) + 1)) {
                if (seen_goals.insert(g).second) {
                    goals.push_back(std::move(g));
                    goal_origin.push_back(&line);
                }
            }
        } else {
            throw ParseError(line.number, head.column, "unknown directive '" + std::string(word) + "'");
        }
    }
    if (!n)
        throw ParseError(lines.empty() ? 1 : lines.front().number, 1, "missing 'agents'");

    ProblemInstance inst;
    inst.mode = mode.value_or(Mode::two_way);
    inst.allow_change = change.value_or(false);
    inst.graph = CommGraph(*n, inst.mode == Mode::one_way);
    for (const auto& [u, v] : edges)
        inst.graph.add_edge(u, v);
    inst.goals = std::move(goals);
    const int deepest = inst.max_goal_depth();
    inst.depth_cap = depth.value_or(std::max(1, deepest));
    for (std::size_t k = 0; k < inst.goals.size(); ++k) {
        if (static_cast<int>(inst.goals[k].fluent.depth()) > inst.depth_cap)
            throw ParseError(goal_origin[k]->number, goal_origin[k]->tokens[0].column,
                             "goal " + to_string(inst.goals[k]) + " is deeper than depth " +
                                 std::to_string(inst.depth_cap) +
                                 (depth_line ? " (line " + std::to_string(*depth_line) + ")" : ""));
    }
    return inst;
}

std::string serialize_problem(const ProblemInstance& inst) {
    std::string out;
    out += "agents " + std::to_string(inst.agent_count()) + "\n";
    out += "mode " + std::string(to_string(inst.mode)) + "\n";
    out += "depth " + std::to_string(inst.depth_cap) + "\n";
    out += std::string("change ") + (inst.allow_change ? "on" : "off") + "\n";
    for (const auto& [u, v] : inst.graph.edges())
        out += "edge " + std::to_string(u) + " " + std::to_string(v) + "\n";
    for (const auto& g : inst.goals) {
        out += g.positive ? "goal +" : "goal -";
        for (AgentId a : g.fluent.knowers)
            out += " " + std::to_string(a);
        out += " " + std::to_string(g.fluent.secret) + "\n";
    }
    return out;
}

Plan parse_plan(std::string_view text, Mode fallback) {
    Plan plan;
    std::optional<Mode> mode;
    const auto settle = [&](const Line& line, const Token& at, Mode m) {
        if (mode && *mode != m)
            throw ParseError(line.number, at.column,
                             "'" + std::string(at.text) + "' mixes " + std::string(to_string(m)) + " with " +
                                 std::string(to_string(*mode)) + " items");
        mode = m;
    };
    const auto id = [](const Line& line, const Token& t) {
        const long long v = to_int(line, t);
        if (v < 1 || v > 1'000'000)
            throw ParseError(line.number, t.column, "agent id out of range");
        return static_cast<AgentId>(v);
    };
    for (const auto& line : tokenize(text)) {
        const auto& head = line.tokens[0];
        if (head.text == "call") {
            expect_count(line, 3, "call I J");
            settle(line, head, Mode::two_way);
            plan.items.emplace_back(TwoWayCall{id(line, line.tokens[1]), id(line, line.tokens[2])});
        } else if (head.text == "send") {
            expect_count(line, 3, "send I J");
            settle(line, head, Mode::one_way);
            plan.items.emplace_back(OneWayCall{id(line, line.tokens[1]), id(line, line.tokens[2])});
        } else if (head.text == "change") {
            expect_count(line, 2, "change I");
            plan.items.emplace_back(Change{id(line, line.tokens[1])});
        } else if (head.text == "step") {
            settle(line, head, Mode::parallel);
            ParallelStep step;
            // Tokens after `step` form `call I J` groups separated by ';'
            // which may stick to the preceding number.
            std::vector<Token> flat;
            for (std::size_t k = 1; k < line.tokens.size(); ++k) {
                Token t = line.tokens[k];
                while (!t.text.empty()) {
                    const auto semi = t.text.find(';');
                    if (semi == std::string_view::npos) {
                        flat.push_back(t);
                        break;
                    }
                    if (semi > 0)
                        flat.push_back(Token{t.text.substr(0, semi), t.column});
                    flat.push_back(Token{";", t.column + static_cast<int>(semi)});
                    t = Token{t.text.substr(semi + 1), t.column + static_cast<int>(semi) + 1};
                }
            }
            std::size_t k = 0;
            while (k < flat.size()) {
                if (flat[k].text != "call" || k + 2 >= flat.size())
                    throw ParseError(line.number, flat[k].column, "expected 'call I J' inside step");
                step.calls.push_back(TwoWayCall{id(line, flat[k + 1]), id(line, flat[k + 2])});
                k += 3;
                if (k < flat.size()) {
                    if (flat[k].text != ";")
                        throw ParseError(line.number, flat[k].column, "expected ';' between calls");
                    ++k;
                    if (k == flat.size())
                        throw ParseError(line.number, flat[k - 1].column, "dangling ';'");
                }
            }
            plan.items.emplace_back(std::move(step));
        } else {
            throw ParseError(line.number, head.column, "unknown plan item '" + std::string(head.text) + "'");
        }
    }
    plan.mode = mode.value_or(fallback);
    return plan;
}

std::string serialize_plan(const Plan& plan) {
    std::string out;
    for (const auto& item : plan.items)
        out += to_string(item) + "\n";
    return out;
}

std::vector<StatsRow> sweep_stats(Mode mode, int n_lo, int n_hi, int d_lo, int d_hi, bool verify_plans) {
    if (n_lo < 2 || n_hi < n_lo || d_lo < 1 || d_hi < d_lo)
        throw std::invalid_argument("stats ranges need 2 <= n_lo <= n_hi and 1 <= d_lo <= d_hi");
    std::vector<StatsRow> rows;
    for (int n = n_lo; n <= n_hi; ++n) {
        for (int d = d_lo; d <= d_hi; ++d) {
            const ProblemInstance inst = full_gossip_instance(n, d, mode);
            const Selection sel = auto_select(inst);
            if (!sel.plan || !sel.protocol)
                throw std::logic_error("no protocol for a complete graph: " + sel.reason);
            StatsRow row;
            row.mode = mode;
            row.n = n;
            row.d = d;
            row.protocol = *sel.protocol;
            row.measured = static_cast<long long>(sel.plan->length());
            row.formula = protocol_length(*sel.protocol, n, d);
            row.match = row.measured == row.formula;
            if (verify_plans)
                row.verified = verify(inst, *sel.plan).success;
            rows.push_back(row);
        }
    }
    return rows;
}

std::string emit_stats_csv(const std::vector<StatsRow>& rows) {
    std::string out = "mode,n,d,protocol,calls_or_steps,formula,match\n";
    for (const auto& r : rows) {
        out += std::string(to_string(r.mode)) + "," + std::to_string(r.n) + "," + std::to_string(r.d) + "," +
               std::string(to_string(r.protocol)) + "," + std::to_string(r.measured) + "," +
               std::to_string(r.formula) + "," + (r.match ? "true" : "false") + "\n";
    }
    return out;
}

} // namespace epigossip
