#include "epigossip/cli.hpp"
#include "epigossip/error.hpp"
#include "epigossip/io.hpp"
#include "epigossip/planner.hpp"
#include "epigossip/protocols.hpp"
#include "epigossip/reduction.hpp"

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

namespace py = pybind11;
using namespace epigossip;

namespace {

// Plan items cross the boundary as tuples:
// ("call", i, j), ("send", from, to), ("change", a), ("step", [(i, j), ...]).
py::tuple item_to_tuple(const PlanItem& item) {
    if (const auto* c = std::get_if<TwoWayCall>(&item))
        return py::make_tuple("call", c->i, c->j);
    if (const auto* c = std::get_if<OneWayCall>(&item))
        return py::make_tuple("send", c->from, c->to);
    if (const auto* c = std::get_if<Change>(&item))
        return py::make_tuple("change", c->agent);
    py::list calls;
    for (const auto& c : std::get<ParallelStep>(item).calls)
        calls.append(py::make_tuple(c.i, c.j));
    return py::make_tuple("step", calls);
}

PlanItem tuple_to_item(const py::tuple& t) {
    if (t.empty())
        throw py::value_error("empty plan item");
    const auto kind = t[0].cast<std::string>();
    if (kind == "call" && t.size() == 3)
        return TwoWayCall{t[1].cast<AgentId>(), t[2].cast<AgentId>()};
    if (kind == "send" && t.size() == 3)
        return OneWayCall{t[1].cast<AgentId>(), t[2].cast<AgentId>()};
    if (kind == "change" && t.size() == 2)
        return Change{t[1].cast<AgentId>()};
    if (kind == "step" && t.size() == 2) {
        ParallelStep step;
        for (const auto& pair : t[1].cast<std::vector<std::pair<AgentId, AgentId>>>())
            step.calls.push_back({pair.first, pair.second});
        return step;
    }
    throw py::value_error("unknown plan item: " + kind);
}

py::list plan_items(const Plan& p) {
    py::list out;
    for (const auto& item : p.items)
        out.append(item_to_tuple(item));
    return out;
}

SearchOptions options(std::uint64_t budget, int threads) {
    SearchOptions o;
    o.node_budget = budget;
    o.threads = threads;
    return o;
}

} // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Epistemic gossip planning";

    py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);
    py::register_exception<PlanExecutionError>(m, "PlanExecutionError", PyExc_RuntimeError);
    py::register_exception<DepthOverflowError>(m, "DepthOverflowError", PyExc_IndexError);

    py::enum_<Mode>(m, "Mode")
        .value("TWO_WAY", Mode::two_way)
        .value("ONE_WAY", Mode::one_way)
        .value("PARALLEL", Mode::parallel);
    py::enum_<Protocol>(m, "Protocol")
        .value("SPANNING_TREE", Protocol::spanning_tree)
        .value("HAMILTONIAN", Protocol::hamiltonian)
        .value("BIPARTITE", Protocol::bipartite)
        .value("DIRECTIONAL", Protocol::directional)
        .value("PARALLEL", Protocol::parallel);
    py::enum_<SearchStatus>(m, "SearchStatus")
        .value("FOUND", SearchStatus::found)
        .value("PROVEN_ABSENT", SearchStatus::proven_absent)
        .value("BUDGET_EXHAUSTED", SearchStatus::budget_exhausted);

    py::class_<Fluent>(m, "Fluent")
        .def(py::init([](std::vector<AgentId> knowers, AgentId secret) { return Fluent{std::move(knowers), secret}; }),
             py::arg("knowers"), py::arg("secret"))
        .def_readonly("knowers", &Fluent::knowers)
        .def_readonly("secret", &Fluent::secret)
        .def_property_readonly("depth", &Fluent::depth)
        .def("canonical", [](const Fluent& f) { return canonicalize(f); })
        .def("is_canonical", [](const Fluent& f) { return is_canonical(f); })
        .def("is_self_evident", [](const Fluent& f) { return is_self_evident(f); })
        .def("__eq__", [](const Fluent& a, const Fluent& b) { return a == b; })
        .def("__hash__", [](const Fluent& f) { return py::hash(py::make_tuple(py::tuple(py::cast(f.knowers)), f.secret)); })
        .def("__str__", [](const Fluent& f) { return to_string(f); })
        .def("__repr__", [](const Fluent& f) { return "Fluent(" + to_string(f) + ")"; });

    py::class_<SignedGoal>(m, "Goal")
        .def(py::init([](bool positive, Fluent f) { return SignedGoal{positive, std::move(f)}; }),
             py::arg("positive"), py::arg("fluent"))
        .def_readonly("positive", &SignedGoal::positive)
        .def_readonly("fluent", &SignedGoal::fluent)
        .def("__eq__", [](const SignedGoal& a, const SignedGoal& b) { return a == b; })
        .def("__str__", [](const SignedGoal& g) { return to_string(g); })
        .def("__repr__", [](const SignedGoal& g) { return "Goal(" + to_string(g) + ")"; });
    m.def("goal_T", &goal_T, py::arg("n"), py::arg("r"), "Positive goals for every depth r-1 fluent over n agents.");

    py::class_<CommGraph>(m, "Graph")
        .def(py::init<int, bool>(), py::arg("n"), py::arg("directed") = false)
        .def_static("complete", &CommGraph::complete)
        .def_static("complete_digraph", &CommGraph::complete_digraph)
        .def_static("path", &CommGraph::path)
        .def("add_edge", &CommGraph::add_edge)
        .def("has_edge", &CommGraph::has_edge)
        .def("neighbors", &CommGraph::neighbors)
        .def_property_readonly("agent_count", &CommGraph::agent_count)
        .def_property_readonly("directed", &CommGraph::directed)
        .def_property_readonly("edges", [](const CommGraph& g) {
            return std::vector<std::pair<AgentId, AgentId>>(g.edges().begin(), g.edges().end());
        });

    py::class_<ProblemInstance>(m, "Problem")
        .def(py::init<>())
        .def_readwrite("graph", &ProblemInstance::graph)
        .def_readwrite("mode", &ProblemInstance::mode)
        .def_readwrite("goals", &ProblemInstance::goals)
        .def_readwrite("depth_cap", &ProblemInstance::depth_cap)
        .def_readwrite("allow_change", &ProblemInstance::allow_change)
        .def_property_readonly("agent_count", &ProblemInstance::agent_count)
        .def("validate", &ProblemInstance::validate)
        .def_static("parse", [](const std::string& text) { return parse_problem(text); })
        .def("to_text", [](const ProblemInstance& p) { return serialize_problem(p); })
        .def("__eq__", [](const ProblemInstance& a, const ProblemInstance& b) { return a == b; });
    m.def("full_gossip", &full_gossip_instance, py::arg("n"), py::arg("d"), py::arg("mode") = Mode::two_way,
          "Complete graph (or digraph) with goal_T(n, d+1) at depth cap d+1.");

    py::class_<Plan>(m, "Plan")
        .def(py::init([](Mode mode, const std::vector<py::tuple>& items) {
                 Plan p;
                 p.mode = mode;
                 for (const auto& t : items)
                     p.items.push_back(tuple_to_item(t));
                 return p;
             }),
             py::arg("mode") = Mode::two_way, py::arg("items") = std::vector<py::tuple>{})
        .def_readonly("mode", &Plan::mode)
        .def_property_readonly("items", &plan_items)
        .def("__len__", &Plan::length)
        .def_static("parse", [](const std::string& text, Mode fallback) { return parse_plan(text, fallback); },
                    py::arg("text"), py::arg("fallback") = Mode::two_way)
        .def("to_text", [](const Plan& p) { return serialize_plan(p); })
        .def("__eq__", [](const Plan& a, const Plan& b) { return a == b; })
        .def("__repr__", [](const Plan& p) { return "Plan(" + std::to_string(p.length()) + " items)"; });

    py::class_<KnowledgeState>(m, "State")
        .def("is_true", &KnowledgeState::is_true)
        .def("knows", &KnowledgeState::knows)
        .def("truths", &KnowledgeState::truths)
        .def_property_readonly("truth_count", &KnowledgeState::truth_count);

    py::class_<VerificationReport>(m, "Verification")
        .def_readonly("success", &VerificationReport::success)
        .def_readonly("failing_goal", &VerificationReport::failing_goal)
        .def_readonly("state_trace", &VerificationReport::state_trace)
        .def("__bool__", [](const VerificationReport& r) { return r.success; });

    py::class_<SearchResult>(m, "SearchResult")
        .def_readonly("status", &SearchResult::status)
        .def_readonly("plan", &SearchResult::plan)
        .def_readonly("exhausted_length", &SearchResult::exhausted_length)
        .def_readonly("bound", &SearchResult::bound)
        .def_readonly("nodes", &SearchResult::nodes);

    py::class_<Selection>(m, "Selection")
        .def_readonly("plan", &Selection::plan)
        .def_readonly("protocol", &Selection::protocol)
        .def_readonly("reason", &Selection::reason);

    m.def("execute", &execute, py::arg("problem"), py::arg("plan"));
    m.def("verify", &verify, py::arg("problem"), py::arg("plan"), py::arg("trace") = false);
    m.def("quick_infeasible", &quick_infeasible, py::arg("problem"));
    m.def("auto_select", &auto_select, py::arg("problem"));
    m.def("protocol_length", &protocol_length, py::arg("protocol"), py::arg("n"), py::arg("d"));
    m.def(
        "search_optimal",
        [](const ProblemInstance& p, int max_len, std::uint64_t budget, int threads) {
            py::gil_scoped_release release;
            return search_optimal(p, max_len, options(budget, threads));
        },
        py::arg("problem"), py::arg("max_len"), py::arg("node_budget") = 0, py::arg("threads") = 1);
    m.def(
        "min_parallel_steps",
        [](const ProblemInstance& p, int max_steps, std::uint64_t budget, int threads) {
            py::gil_scoped_release release;
            return min_parallel_steps(p, max_steps, options(budget, threads));
        },
        py::arg("problem"), py::arg("max_steps"), py::arg("node_budget") = 0, py::arg("threads") = 1);
    m.def(
        "solve_neg",
        [](const ProblemInstance& p, bool shortest, std::uint64_t budget, int threads) {
            NegOptions o;
            o.search = options(budget, threads);
            o.shortest = shortest;
            py::gil_scoped_release release;
            return solve_neg(p, o);
        },
        py::arg("problem"), py::arg("shortest") = false, py::arg("node_budget") = 0, py::arg("threads") = 1);
    m.def("negative_goal_bound", &negative_goal_bound, py::arg("problem"));
    m.def("hierarchy_demo", &hierarchy_demo, py::arg("levels"));

    py::class_<CnfFormula>(m, "Cnf")
        .def(py::init([](int vars, std::vector<std::vector<int>> clauses) { return CnfFormula{vars, std::move(clauses)}; }),
             py::arg("var_count"), py::arg("clauses"))
        .def_readonly("var_count", &CnfFormula::var_count)
        .def_readonly("clauses", &CnfFormula::clauses)
        .def_static("parse", [](const std::string& text) { return parse_dimacs(text); })
        .def("to_dimacs", [](const CnfFormula& f) { return to_dimacs(f); })
        .def("__eq__", [](const CnfFormula& a, const CnfFormula& b) { return a == b; });

    py::class_<ReductionMap>(m, "Reduction")
        .def_readonly("source", &ReductionMap::source)
        .def_readonly("clauses", &ReductionMap::clauses)
        .def_readonly("cnf", &ReductionMap::cnf)
        .def("literal_node", &ReductionMap::literal_node);

    m.def("sat_oracle", &sat_oracle, py::arg("cnf"));
    m.def("satisfies", &satisfies, py::arg("cnf"), py::arg("assignment"));
    m.def("sat_to_gossip", &sat_to_gossip, py::arg("cnf"));
    m.def("extract_assignment", &extract_assignment, py::arg("plan"), py::arg("reduction"));

    m.def(
        "run_cli",
        [](const std::vector<std::string>& args) {
            std::ostringstream out;
            std::ostringstream err;
            const int code = run_cli(args, out, err);
            return py::make_tuple(code, out.str(), err.str());
        },
        py::arg("args"), "Runs one command line; returns (exit code, stdout, stderr).");
}
