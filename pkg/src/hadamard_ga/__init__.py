"""Genetic search for Hadamard matrices with a reproducible benchmark harness."""

from .core import (
    as_sign_matrix,
    fitness_f1,
    fitness_f2,
    gram,
    is_balanced,
    is_hadamard,
    sylvester,
)
from .engine import (
    GAConfig,
    MutationPlan,
    RunRecord,
    SearchState,
    crossover,
    detect_stall,
    evaluate,
    init_population,
    initial_state,
    make_mutation_plan,
    mutate,
    run_search,
    select,
    step,
)
from .rand import RngStream, random_seed, shuffle_column

__version__ = "0.1.0"

__all__ = [
    "GAConfig",
    "MutationPlan",
    "RngStream",
    "RunRecord",
    "SearchState",
    "as_sign_matrix",
    "crossover",
    "detect_stall",
    "evaluate",
    "fitness_f1",
    "fitness_f2",
    "gram",
    "init_population",
    "initial_state",
    "is_balanced",
    "is_hadamard",
    "make_mutation_plan",
    "mutate",
    "random_seed",
    "run_search",
    "select",
    "shuffle_column",
    "step",
    "sylvester",
    "__version__",
]
