"""NK landscape benchmark toolkit.

Generate random NK fitness landscape instances, certify their global
optima with a seeded branch-and-bound solver, and benchmark hBOA, UMDA,
and GA variants (with deterministic hill climbing, restricted tournament
replacement, and bisection population sizing) across (n, k) grids.
"""

from .landscape import (
    FITNESS_ATOL,
    Genome,
    NkInstance,
    delta_evaluate,
    evaluate,
    evaluate_batch,
    generate_instance,
    load_instance,
    save_instance,
)
from .local_search import LocalSearchResult, dhc, stochastic_hill_climb
from .exact import (
    ExactResult,
    NodeLimitError,
    enumerate_optimum,
    seed_incumbent,
    solve,
    upper_bound,
)
from .evolution import (
    ALGORITHMS,
    EvoConfig,
    Population,
    ProbVector,
    RunOutcome,
    bit_flip_mutation,
    rtr_replace,
    run_evolution,
    tournament_select,
    two_point_crossover,
    umda_learn,
    umda_sample,
    uniform_crossover,
)
from .hboa import BayesNetModel, TreeNode, leaf_score, learn_model, sample_model, split_gain
from .harness import (
    AlgorithmSpec,
    BisectionResult,
    CellAggregate,
    PopulationCapError,
    RatioCurve,
    RunStats,
    SweepConfig,
    aggregate,
    bisect_population_size,
    compare,
    execute_sweep,
    run_sweep,
)

__version__ = "0.1.0"
