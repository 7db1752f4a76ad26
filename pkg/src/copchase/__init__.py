"""Pursuit games on graphs: exact adversarial capture times, expected capture
times against a random-walking robber, cost-of-drunkenness ratios, and
open-loop strategy evaluation, with Monte Carlo cross-checks."""

from .chain import (
    CaptureDistribution,
    FixedStrategy,
    NonterminatingStrategyError,
    StrategyError,
    adversarial_survival_time,
    base_transition,
    cop_modified_transition,
    evolve,
    fixed_strategy_capture_distribution,
    fixed_strategy_expected_time,
    placement_matrix,
    read_strategy,
    uniform_placement,
    write_strategy,
)
from .graphs import (
    FamilySpec,
    Graph,
    GraphDiagnostics,
    GraphError,
    barbell,
    cartesian_product,
    complete_tree,
    cycle,
    grid,
    lollipop,
    path,
    read_edge_list,
    relabel,
    validate,
    write_edge_list,
)
from .montecarlo import (
    SeedSpec,
    SimReport,
    SimulationError,
    simulate_drunk_pursuit,
    simulate_random_cops,
    walk_deviation_check,
)
from .solver import (
    INFINITE,
    AdversarialSolution,
    ConvergenceError,
    CopNumberError,
    DrunkennessReport,
    DrunkSolution,
    FeedbackPolicy,
    RobberPolicy,
    SolveOptions,
    StateSpaceError,
    ValueTable,
    capture_time,
    cop_number,
    cost_of_drunkenness,
    drunk_capture_time,
    drunkenness_report,
    extract_policy,
    policy_value,
    solve_adversarial,
    solve_drunk,
)

__version__ = "0.1.0"
