import os
import pathlib

import pytest

import epigossip as eg

FIXTURES = pathlib.Path(os.environ.get("EPIGOSSIP_FIXTURES", pathlib.Path(__file__).parent.parent / "fixtures"))


def test_fluents():
    f = eg.Fluent([1, 1, 2], 3)
    assert f.canonical() == eg.Fluent([1, 2], 3)
    assert not f.is_canonical()
    assert eg.Fluent([2], 2).is_self_evident()
    assert eg.Fluent([1, 2], 3).depth == 2
    assert len({eg.Fluent([1], 2), eg.Fluent([1], 2)}) == 1
    assert len(eg.goal_T(3, 2)) == 6


def test_protocols_verify():
    for mode, protocol in [
        (eg.Mode.TWO_WAY, eg.Protocol.BIPARTITE),
        (eg.Mode.ONE_WAY, eg.Protocol.DIRECTIONAL),
        (eg.Mode.PARALLEL, eg.Protocol.PARALLEL),
    ]:
        problem = eg.full_gossip(6, 2, mode)
        sel = eg.auto_select(problem)
        assert sel.protocol == protocol
        assert len(sel.plan) == eg.protocol_length(protocol, 6, 2)
        assert eg.verify(problem, sel.plan).success


def test_plan_items_and_text():
    plan = eg.Plan(eg.Mode.TWO_WAY, [("call", 1, 2), ("change", 1)])
    assert plan.items == [("call", 1, 2), ("change", 1)]
    assert eg.Plan.parse(plan.to_text()) == plan
    step = eg.Plan(eg.Mode.PARALLEL, [("step", [(1, 2), (3, 4)])])
    assert step.items[0] == ("step", [(1, 2), (3, 4)])
    with pytest.raises(ValueError):
        eg.Plan(eg.Mode.TWO_WAY, [("shout", 1, 2)])


def test_execute_and_errors():
    problem = eg.full_gossip(3, 1)
    state = eg.execute(problem, eg.Plan(eg.Mode.TWO_WAY, [("call", 1, 2)]))
    assert state.knows(2, eg.Fluent([], 1))
    assert not state.knows(3, eg.Fluent([], 1))
    assert state.knows(3, eg.Fluent([1], 1))
    report = eg.verify(problem, eg.Plan(eg.Mode.TWO_WAY, [("call", 1, 2)]))
    assert not report
    assert report.failing_goal is not None
    with pytest.raises(eg.ParseError):
        eg.Problem.parse("agents 2\nbogus\n")


def test_search():
    r = eg.search_optimal(eg.full_gossip(4, 1), 6)
    assert r.status == eg.SearchStatus.FOUND
    assert len(r.plan) == 4
    assert r.exhausted_length == 3
    assert len(eg.min_parallel_steps(eg.full_gossip(4, 1, eg.Mode.PARALLEL), 4).plan) == 2


def test_negative_goals():
    problem = eg.Problem()
    problem.graph = eg.Graph.complete(2)
    problem.goals = [eg.Goal(True, eg.Fluent([1], 2)), eg.Goal(False, eg.Fluent([2], 1))]
    assert eg.solve_neg(problem).status == eg.SearchStatus.PROVEN_ABSENT
    problem.allow_change = True
    r = eg.solve_neg(problem)
    assert r.plan.items == [("call", 1, 2), ("change", 1)]


def test_reduction_round_trip():
    for cnf, sat in [(eg.Cnf(2, [[1, 2], [-1]]), True), (eg.Cnf(1, [[1], [-1]]), False)]:
        problem, red = eg.sat_to_gossip(cnf)
        r = eg.solve_neg(problem)
        assert (r.status == eg.SearchStatus.FOUND) == sat == (eg.sat_oracle(cnf) is not None)
        if sat:
            assert eg.satisfies(red.cnf, eg.extract_assignment(r.plan, red))


def test_hierarchy_and_cli(tmp_path):
    problem, plan = eg.hierarchy_demo({1: 0, 2: 1, 3: 2})
    assert eg.verify(problem, plan).success
    assert eg.Problem.parse(problem.to_text()) == problem

    code, out, _ = eg.run_cli(["verify", str(FIXTURES / "forget.gsp"), str(FIXTURES / "forget.gpl")])
    assert code == 0 and "success" in out
    code, _, _ = eg.run_cli(["solve-neg", str(FIXTURES / "forget_nochange.gsp")])
    assert code == 1
    assert eg.run_cli(["frobnicate"])[0] == 2
