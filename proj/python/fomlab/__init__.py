"""Fully online matching lab: Ranking, duals, charging bounds and hardness instances."""

from ._fomlab import (
    Algorithm,
    BoundPoint,
    BoundReport,
    ChargingFunction,
    EdgeEstimate,
    Error,
    FeasibilityReport,
    Instance,
    MatchingOutcome,
    Role,
    adversary_ratio,
    assign_duals,
    charging_by_name,
    check_properties,
    empirical_ratio,
    exact_edge_cover,
    fluid_recurrence,
    gen_adversary_tree,
    gen_ranking_hard,
    instance_from_json,
    marginal_rank,
    max_matching,
    omega_fixed_point,
    random_instance,
    ratio_bipartite,
    ratio_general,
    run_cli,
    run_greedy,
    run_ranking,
    sample_ranks,
    verify_feasibility,
)

__all__ = [name for name in dir() if not name.startswith("_")]
