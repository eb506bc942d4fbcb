"""Exact solver for the sequential competitive facility location problem."""

from ._core import (
    Instance,
    SolveReport,
    appendix_example,
    brute_force_solve,
    follower_best_response,
    full_lp_value,
    generate_instance,
    leader_share,
    load_instance,
    root_gap_pct,
    save_instance,
    solve,
    verify_aggregation,
    verify_hull,
    verify_prop61,
)

__all__ = [
    "Instance",
    "SolveReport",
    "appendix_example",
    "brute_force_solve",
    "follower_best_response",
    "full_lp_value",
    "generate_instance",
    "leader_share",
    "load_instance",
    "root_gap_pct",
    "save_instance",
    "solve",
    "verify_aggregation",
    "verify_hull",
    "verify_prop61",
]
