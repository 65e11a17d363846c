"""Genetic search for Hadamard matrices of order 4k.

The population is a single int8 array of shape (4N, m, m) laid out as

    [parents A: 0..N) [parents B: N..2N) [offspring: 2N..4N)

Parent i in block A is paired with parent N+i in block B during
crossover; their two offspring land at 2N+i and 3N+i. Every individual
keeps an all-+1 first column and balanced (+1/-1) remaining columns at
all times: initialization shuffles balanced columns, crossover moves
whole columns, and mutation flips opposite-sign pairs within a column.

One generation is: move the 2N fittest individuals into the parent
blocks in random order, rebuild all offspring by column-block crossover,
mutate the offspring, then re-evaluate them. Minimum fitness therefore
never increases (the best individual always survives as a parent).

All randomness is drawn from counter-based streams keyed by
(seed, purpose, generation, matrix, column), so a run is bit-reproducible
for a given seed regardless of worker count.
"""

from __future__ import annotations

import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import core
from .rand import MASK64, RngStream, random_seed, stream_keys, stream_words

__all__ = [
    "FITNESS_CHOICES",
    "MUTATION_STRATEGIES",
    "MAX_ORDER",
    "MAX_POPULATION",
    "MAX_ITERATIONS",
    "GAConfig",
    "MutationPlan",
    "SearchState",
    "RunRecord",
    "init_population",
    "evaluate",
    "select",
    "draw_crossover_points",
    "crossover",
    "make_mutation_plan",
    "mutate",
    "initial_state",
    "step",
    "detect_stall",
    "run_search",
]

FITNESS_CHOICES = ("f1", "f2")
MUTATION_STRATEGIES = ("shared", "per-matrix", "multi")

# Stream ids pack purpose | generation | matrix | column into 64 bits:
# 4 + 28 + 20 + 12. The packing is collision-free within these limits,
# which sit far beyond any practical search size.
_GEN_BITS = 28
_MATRIX_BITS = 20
_COL_BITS = 12

MAX_ORDER = 1 << _COL_BITS          # 4096
MAX_POPULATION = (1 << _MATRIX_BITS) // 4   # N such that 4N fits
MAX_ITERATIONS = (1 << _GEN_BITS) - 1

_P_INIT = 1
_P_SELECT = 2
_P_CROSSOVER = 3
_P_MUT_COL = 4
_P_MUT_ROW_A = 5
_P_MUT_ROW_B = 6
_P_RESTART = 7

# Extra per-generation validation (balance, fitness freshness) for tests;
# costs about as much as an evaluation, so off by default.
DEBUG_CHECKS = False


def _sid(purpose: int, generation: int = 0, matrix: int = 0, column: int = 0) -> int:
    return (
        (purpose << (_GEN_BITS + _MATRIX_BITS + _COL_BITS))
        | (generation << (_MATRIX_BITS + _COL_BITS))
        | (matrix << _COL_BITS)
        | column
    )


@dataclass(frozen=True)
class GAConfig:
    """All parameters of one search.

    `population` is the pair count N: the engine keeps 4N matrices
    (2N parents + 2N offspring). `mutation_cols` (NC) is the number of
    columns targeted per offspring each generation and
    `mutation_row_pairs` (NR) the number of row pairs tried per column.
    """

    order: int
    population: int = 1000
    max_iterations: int = 100_000
    mutation_cols: int = 1
    mutation_row_pairs: int = 2
    fitness: str = "f2"
    mutation: str = "multi"
    seed: int | None = None
    stall_window: int | None = None
    time_budget_secs: float | None = None

    def __post_init__(self):
        m = self.order
        if not isinstance(m, int) or m < 4 or m % 4 != 0:
            raise ValueError(f"order must be a positive multiple of 4, got {m}")
        if m > MAX_ORDER:
            raise ValueError(f"order {m} exceeds engine limit {MAX_ORDER}")
        if not 1 <= self.population <= MAX_POPULATION:
            raise ValueError(f"population must be in [1, {MAX_POPULATION}]")
        if not 0 <= self.max_iterations <= MAX_ITERATIONS:
            raise ValueError(f"max_iterations must be in [0, {MAX_ITERATIONS}]")
        if not 1 <= self.mutation_cols <= m - 1:
            raise ValueError(f"mutation_cols must be in [1, {m - 1}]")
        if not 1 <= self.mutation_row_pairs <= m // 2:
            raise ValueError(f"mutation_row_pairs must be in [1, {m // 2}]")
        if self.fitness not in FITNESS_CHOICES:
            raise ValueError(f"fitness must be one of {FITNESS_CHOICES}")
        if self.mutation not in MUTATION_STRATEGIES:
            raise ValueError(f"mutation must be one of {MUTATION_STRATEGIES}")
        if self.seed is not None and not isinstance(self.seed, int):
            raise ValueError("seed must be an integer or None")
        if self.stall_window is not None and self.stall_window < 1:
            raise ValueError("stall_window must be >= 1")
        if self.time_budget_secs is not None and self.time_budget_secs <= 0:
            raise ValueError("time_budget_secs must be positive")

    @property
    def k(self) -> int:
        return self.order // 4

    @property
    def parents(self) -> int:
        """Number of parent slots, 2N."""
        return 2 * self.population

    @property
    def total(self) -> int:
        """Total individuals, 4N."""
        return 4 * self.population


def _random_balanced(
    order: int, count: int, seed: int, purpose: int, generation: int, first_slot: int
) -> np.ndarray:
    """`count` fresh balanced matrices, one RNG stream per (slot, column).

    Each column starts as m/2 times -1 on top of m/2 times +1 and gets an
    independent Fisher-Yates shuffle, vectorized across all (slot, column)
    pairs. Bit-identical to calling `rand.shuffle_column` per column with
    stream id _sid(purpose, generation, slot, column).
    """
    m = order
    pop = np.ones((count, m, m), dtype=np.int8)
    pop[:, : m // 2, 1:] = -1

    slots = np.arange(first_slot, first_slot + count, dtype=np.uint64)[:, None]
    cols = np.arange(1, m, dtype=np.uint64)[None, :]
    base = np.uint64(_sid(purpose, generation))
    sids = base | (slots << np.uint64(_COL_BITS)) | cols
    keys = stream_keys(seed, sids)

    rows_sel = np.arange(count)[:, None]
    cols_sel = np.arange(1, m)[None, :]
    for i1 in range(m - 1):
        words = stream_words(keys, i1)
        i2 = i1 + (words % np.uint64(m - i1)).astype(np.int64)
        top = pop[rows_sel, i1, cols_sel].copy()
        pop[rows_sel, i1, cols_sel] = pop[rows_sel, i2, cols_sel]
        pop[rows_sel, i2, cols_sel] = top
    return pop


def init_population(config: GAConfig, seed: int | None = None) -> np.ndarray:
    """Initial population of 4N balanced matrices for `config`.

    `seed` falls back to config.seed; one of the two must be given here
    (run_search resolves entropy seeding before calling this).
    """
    if seed is None:
        seed = config.seed
    if seed is None:
        raise ValueError("init_population needs an explicit seed")
    return _random_balanced(
        config.order, config.total, seed & MASK64, _P_INIT, 0, 0
    )


def _fitness_batch(batch: np.ndarray, fitness: str) -> np.ndarray:
    """Fitness of every matrix in an (n, m, m) batch, exact int64.

    The Gram products run as batched float32 GEMMs; entries are integer
    sums bounded by m <= 4096 < 2**24, so the float path is exact and
    matches `core.fitness_f1` / `core.fitness_f2` bit for bit.
    """
    m = batch.shape[1]
    q = batch.astype(np.float32)
    g = np.matmul(q.transpose(0, 2, 1), q)
    if fitness == "f1":
        g_int = g.astype(np.int32)
        return np.abs(g_int).sum(axis=(1, 2), dtype=np.int64) - m * m
    return np.count_nonzero(g, axis=(1, 2)).astype(np.int64) - m


def evaluate(population: np.ndarray, fitness: str = "f2", workers: int = 1) -> np.ndarray:
    """Fitness vector aligned index-for-index with `population`.

    Pure and data-parallel: with workers > 1 the batch is chunked across
    a thread pool, with results identical to the single-worker path.
    """
    if fitness not in FITNESS_CHOICES:
        raise ValueError(f"fitness must be one of {FITNESS_CHOICES}")
    n = population.shape[0]
    if workers <= 1 or n < 2 * workers:
        return _fitness_batch(population, fitness)
    chunks = np.array_split(population, workers)
    with ThreadPoolExecutor(max_workers=workers) as pool:
        parts = list(pool.map(lambda c: _fitness_batch(c, fitness), chunks))
    return np.concatenate(parts)


def select(population: np.ndarray, fitness_values: np.ndarray, stream: RngStream) -> None:
    """Move the 2N fittest individuals into the parent slots, in place.

    The 2N lowest fitness values are taken over all 4N individuals (ties
    broken toward lower index via stable sort) and written into slots
    [0, 2N) in uniformly random order; `fitness_values` is permuted
    alongside so parent entries stay aligned. Offspring slots keep stale
    residue and are fully rebuilt by the following crossover.

    `fitness_values` must be current for the whole population.
    """
    half = population.shape[0] // 2
    order = np.argsort(fitness_values, kind="stable")[:half]
    chosen = order[stream.permutation(half)]
    population[:half] = population[chosen]
    fitness_values[:half] = fitness_values[chosen]


def draw_crossover_points(config: GAConfig, seed: int, generation: int) -> np.ndarray:
    """One split column per parent pair, uniform in [1, m-1] inclusive."""
    stream = RngStream(seed, _sid(_P_CROSSOVER, generation))
    return stream.uniform_array(1, config.order - 1, config.population)


def crossover(population: np.ndarray, points: np.ndarray) -> None:
    """Rebuild all offspring from the parent pairs, in place.

    For pair p with split c = points[p]: offspring 2N+p takes columns
    j < c from parent p and columns j >= c from parent N+p; offspring
    3N+p takes the complementary blocks. Columns move whole, so balance
    is preserved. Parents are never written.
    """
    n_pairs = population.shape[0] // 4
    m = population.shape[1]
    points = np.asarray(points)
    if points.shape != (n_pairs,):
        raise ValueError(f"expected {n_pairs} crossover points, got {points.shape}")
    if points.min() < 1 or points.max() > m - 1:
        raise IndexError(f"crossover points must lie in [1, {m - 1}]")

    first = population[:n_pairs]
    second = population[n_pairs : 2 * n_pairs]
    keep = np.arange(m)[None, None, :] < points[:, None, None]
    population[2 * n_pairs : 3 * n_pairs] = np.where(keep, first, second)
    population[3 * n_pairs :] = np.where(keep, second, first)


@dataclass(frozen=True)
class MutationPlan:
    """Flip targets for the 2N offspring.

    `columns` has shape (2N, NC); `rows_a` and `rows_b` have shape
    (2N, NR). Column 0 never appears (its all-+1 contract is permanent).
    Duplicate indices are allowed and applied sequentially, so a repeated
    pick may undo an earlier flip.
    """

    columns: np.ndarray
    rows_a: np.ndarray
    rows_b: np.ndarray

    def __post_init__(self):
        if self.columns.ndim != 2 or self.rows_a.ndim != 2 or self.rows_b.ndim != 2:
            raise ValueError("plan arrays must be 2-D")
        if self.rows_a.shape != self.rows_b.shape:
            raise ValueError("row index arrays must have equal shapes")
        if self.columns.shape[0] != self.rows_a.shape[0]:
            raise ValueError("plan arrays must agree on offspring count")
        if self.columns.size and self.columns.min() < 1:
            raise IndexError("column 0 may not be mutated")


def make_mutation_plan(config: GAConfig, seed: int, generation: int) -> MutationPlan:
    """Draw the mutation plan for one generation.

    multi:      independent uniform picks, (2N, NC) columns and (2N, NR)
                row pairs per offspring.
    per-matrix: the NC = NR = 1 special case of multi.
    shared:     a single (column, row, row) triple drawn once and
                replicated across all offspring; NC/NR are not consulted.
    """
    m = config.order
    n_off = config.parents
    col_stream = RngStream(seed, _sid(_P_MUT_COL, generation))
    row_a_stream = RngStream(seed, _sid(_P_MUT_ROW_A, generation))
    row_b_stream = RngStream(seed, _sid(_P_MUT_ROW_B, generation))

    if config.mutation == "shared":
        col = col_stream.uniform_int(1, m - 1)
        ra = row_a_stream.uniform_int(0, m - 1)
        rb = row_b_stream.uniform_int(0, m - 1)
        return MutationPlan(
            columns=np.full((n_off, 1), col, dtype=np.int64),
            rows_a=np.full((n_off, 1), ra, dtype=np.int64),
            rows_b=np.full((n_off, 1), rb, dtype=np.int64),
        )

    nc = 1 if config.mutation == "per-matrix" else config.mutation_cols
    nr = 1 if config.mutation == "per-matrix" else config.mutation_row_pairs
    return MutationPlan(
        columns=col_stream.uniform_array(1, m - 1, n_off * nc).reshape(n_off, nc),
        rows_a=row_a_stream.uniform_array(0, m - 1, n_off * nr).reshape(n_off, nr),
        rows_b=row_b_stream.uniform_array(0, m - 1, n_off * nr).reshape(n_off, nr),
    )


def mutate(population: np.ndarray, plan: MutationPlan) -> None:
    """Apply the plan to the offspring half of the population, in place.

    For each offspring, columns are visited in plan order and for each
    (row_a, row_b) pair within a column the two entries are negated when
    they differ (which swaps a +1 with a -1 and keeps the column sum) and
    left alone when equal. Parents are untouched.
    """
    total = population.shape[0]
    m = population.shape[1]
    half = total // 2
    offspring = population[half:]
    n_off, n_cols = plan.columns.shape
    n_pairs = plan.rows_a.shape[1]
    if n_off != half:
        raise ValueError(f"plan covers {n_off} offspring, population has {half}")
    if plan.columns.max() > m - 1:
        raise IndexError(f"plan column beyond order {m}")
    for arr in (plan.rows_a, plan.rows_b):
        if arr.min() < 0 or arr.max() > m - 1:
            raise IndexError("plan row index out of range")

    idx = np.arange(n_off)
    for jc in range(n_cols):
        col = plan.columns[:, jc]
        for ir in range(n_pairs):
            ra = plan.rows_a[:, ir]
            rb = plan.rows_b[:, ir]
            va = offspring[idx, ra, col]
            vb = offspring[idx, rb, col]
            flip = va != vb
            if flip.any():
                sel = idx[flip]
                offspring[sel, ra[flip], col[flip]] = vb[flip]
                offspring[sel, rb[flip], col[flip]] = va[flip]


@dataclass
class SearchState:
    """Mutable state of a running search."""

    config: GAConfig
    seed: int
    population: np.ndarray
    fitness: np.ndarray
    iteration: int
    best_matrix: np.ndarray
    best_fitness: int
    trace: list[int] = field(default_factory=list)


@dataclass
class RunRecord:
    """Outcome of one search run."""

    config: GAConfig
    seed: int
    success: bool
    complete: bool
    iterations: int
    best_fitness: int
    best_matrix: np.ndarray
    trace: list[int]
    wall_seconds: float


def initial_state(config: GAConfig, seed: int | None = None, workers: int = 1) -> SearchState:
    """Initialize and evaluate a full population; iteration counter at 0.

    Offspring slots are filled and evaluated too, so the first selection
    already chooses among all 4N candidates. Unseeded configs draw a
    recorded OS-entropy seed.
    """
    if seed is None:
        seed = config.seed if config.seed is not None else random_seed()
    seed &= MASK64
    population = init_population(config, seed)
    fitness = evaluate(population, config.fitness, workers)
    best_idx = int(fitness.argmin())
    best = int(fitness[best_idx])
    return SearchState(
        config=config,
        seed=seed,
        population=population,
        fitness=fitness,
        iteration=0,
        best_matrix=population[best_idx].copy(),
        best_fitness=best,
        trace=[best],
    )


def _note_generation(state: SearchState) -> None:
    fmin_idx = int(state.fitness.argmin())
    fmin = int(state.fitness[fmin_idx])
    state.trace.append(fmin)
    if fmin < state.best_fitness:
        state.best_fitness = fmin
        state.best_matrix = state.population[fmin_idx].copy()


def _check_state(state: SearchState) -> None:
    pop = state.population
    assert (pop[:, :, 0] == 1).all(), "first column lost its all-+1 contract"
    assert (pop[:, :, 1:].sum(axis=1, dtype=np.int64) == 0).all(), "column balance broken"
    assert np.array_equal(
        state.fitness, evaluate(pop, state.config.fitness)
    ), "fitness vector is stale"


def step(state: SearchState, workers: int = 1) -> SearchState:
    """Advance one generation: select, crossover, mutate, evaluate.

    Parent fitness values are carried through selection unchanged (they
    are a pure function of the matrices), so only the 2N offspring are
    re-evaluated. Appends the new minimum fitness to the trace and
    updates the best-so-far individual.
    """
    config = state.config
    generation = state.iteration + 1

    select(state.population, state.fitness, RngStream(state.seed, _sid(_P_SELECT, generation)))
    crossover(state.population, draw_crossover_points(config, state.seed, generation))
    mutate(state.population, make_mutation_plan(config, state.seed, generation))
    half = config.parents
    state.fitness[half:] = evaluate(state.population[half:], config.fitness, workers)
    state.iteration = generation
    _note_generation(state)
    if DEBUG_CHECKS:
        _check_state(state)
    return state


def detect_stall(state: SearchState, window: int) -> bool:
    """True when the min-fitness trace sat flat and positive for `window` steps."""
    if window < 1:
        raise ValueError("window must be >= 1")
    tail = state.trace[-window:]
    if len(tail) < window or tail[-1] == 0:
        return False
    return all(v == tail[0] for v in tail)


def _reinitialize_offspring(state: SearchState, workers: int = 1) -> None:
    """Replace all offspring with fresh balanced matrices; parents retained."""
    config = state.config
    half = config.parents
    fresh = _random_balanced(
        config.order, half, state.seed, _P_RESTART, state.iteration, half
    )
    state.population[half:] = fresh
    state.fitness[half:] = evaluate(fresh, config.fitness, workers)
    fmin_idx = int(state.fitness.argmin())
    if int(state.fitness[fmin_idx]) < state.best_fitness:
        state.best_fitness = int(state.fitness[fmin_idx])
        state.best_matrix = state.population[fmin_idx].copy()


def run_search(config: GAConfig, workers: int = 1) -> RunRecord:
    """Full search: init, then step until fitness 0 or budgets run out.

    Stops on the first Hadamard matrix (minimum fitness 0), after
    `max_iterations` generations, or when the optional wall-clock budget
    is exceeded (the record is then flagged incomplete). With
    `stall_window` set, a flat positive minimum over that many
    generations triggers reinitialization of all offspring slots.
    """
    start = time.perf_counter()
    state = initial_state(config, workers=workers)
    complete = True
    last_restart = 0
    while state.iteration < config.max_iterations and state.best_fitness > 0:
        if (
            config.time_budget_secs is not None
            and time.perf_counter() - start > config.time_budget_secs
        ):
            complete = False
            break
        step(state, workers=workers)
        if (
            config.stall_window is not None
            and state.best_fitness > 0
            and state.iteration - last_restart >= config.stall_window
            and detect_stall(state, config.stall_window)
        ):
            _reinitialize_offspring(state, workers)
            last_restart = state.iteration
    wall = time.perf_counter() - start
    success = state.best_fitness == 0
    return RunRecord(
        config=config,
        seed=state.seed,
        success=success,
        complete=complete or success,
        iterations=state.iteration,
        best_fitness=state.best_fitness,
        best_matrix=state.best_matrix,
        trace=list(state.trace),
        wall_seconds=wall,
    )
