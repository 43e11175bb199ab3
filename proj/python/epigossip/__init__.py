"""Planning and verification for epistemic gossip problems."""

from ._core import (
    Cnf,
    DepthOverflowError,
    Fluent,
    Goal,
    Graph,
    Mode,
    ParseError,
    Plan,
    PlanExecutionError,
    Problem,
    Protocol,
    Reduction,
    SearchResult,
    SearchStatus,
    Selection,
    State,
    Verification,
    auto_select,
    execute,
    extract_assignment,
    full_gossip,
    goal_T,
    hierarchy_demo,
    min_parallel_steps,
    negative_goal_bound,
    protocol_length,
    quick_infeasible,
    run_cli,
    sat_oracle,
    sat_to_gossip,
    satisfies,
    search_optimal,
    solve_neg,
    verify,
)

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
