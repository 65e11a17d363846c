"""Experiment harness: NC x NR iteration grids and fitness-speed comparison.

The grid runner repeats seeded searches per (NC, NR) cell and reports
success counts and iteration statistics; the fitness benchmark times the
identical generation loop under both fitness functions.
"""

from __future__ import annotations

import csv
import io as _stdio
import time
from dataclasses import dataclass, field

import numpy as np

from . import engine
from .engine import GAConfig

__all__ = [
    "GridSpec",
    "CellStats",
    "GridReport",
    "run_grid",
    "write_grid_csv",
    "format_grid_table",
    "FitnessTiming",
    "bench_fitness",
    "format_fitness_table",
]


@dataclass(frozen=True)
class GridSpec:
    """One parameter sweep: every (NC, NR) cell runs `runs` seeded searches."""

    order: int
    population: int = 1000
    max_iterations: int = 10_000
    nc_values: tuple[int, ...] = (1, 2, 3, 4)
    nr_values: tuple[int, ...] = (1, 2, 3, 4)
    runs: int = 10
    fitness: str = "f2"
    mutation: str = "multi"
    seed_base: int = 0

    def __post_init__(self):
        if self.runs < 1:
            raise ValueError("runs must be >= 1")
        for nc in self.nc_values:
            for nr in self.nr_values:
                self.config(nc, nr, 0)  # validates every cell against GAConfig

    def config(self, nc: int, nr: int, seed: int) -> GAConfig:
        return GAConfig(
            order=self.order,
            population=self.population,
            max_iterations=self.max_iterations,
            mutation_cols=nc,
            mutation_row_pairs=nr,
            fitness=self.fitness,
            mutation=self.mutation,
            seed=seed,
        )

    def cell_seed(self, cell_index: int, run_index: int) -> int:
        """Deterministic per-run seed: base + cell and run offsets."""
        return self.seed_base + cell_index * self.runs + run_index


@dataclass
class CellStats:
    nc: int
    nr: int
    runs: int
    successes: int
    mean_iterations: float | None  # over successful runs; None when none succeeded
    min_iterations: int | None
    max_iterations: int | None
    mean_wall_seconds: float


@dataclass
class GridReport:
    spec: GridSpec
    rows: list[dict] = field(default_factory=list)  # one dict per run
    cells: list[CellStats] = field(default_factory=list)

    def cell(self, nc: int, nr: int) -> CellStats:
        for c in self.cells:
            if c.nc == nc and c.nr == nr:
                return c
        raise KeyError(f"no cell NC={nc} NR={nr}")


def run_grid(spec: GridSpec, workers: int = 1, echo: bool = False) -> GridReport:
    """Run every cell of the grid; failures are recorded, never fatal.

    Cell order is nc-major over (nc_values x nr_values); run seeds come
    from `spec.cell_seed` and are recorded per row, so rerunning the same
    spec reproduces every iteration count exactly.
    """
    report = GridReport(spec=spec)
    cell_index = 0
    for nc in spec.nc_values:
        for nr in spec.nr_values:
            iters_ok: list[int] = []
            walls: list[float] = []
            successes = 0
            for run_index in range(spec.runs):
                seed = spec.cell_seed(cell_index, run_index)
                record = engine.run_search(spec.config(nc, nr, seed), workers=workers)
                report.rows.append(
                    {
                        "m": spec.order,
                        "N": spec.population,
                        "T": spec.max_iterations,
                        "NC": nc,
                        "NR": nr,
                        "run_index": run_index,
                        "seed": seed,
                        "success": record.success,
                        "iterations": record.iterations,
                        "wall_seconds": record.wall_seconds,
                    }
                )
                walls.append(record.wall_seconds)
                if record.success:
                    successes += 1
                    iters_ok.append(record.iterations)
            stats = CellStats(
                nc=nc,
                nr=nr,
                runs=spec.runs,
                successes=successes,
                mean_iterations=float(np.mean(iters_ok)) if iters_ok else None,
                min_iterations=min(iters_ok) if iters_ok else None,
                max_iterations=max(iters_ok) if iters_ok else None,
                mean_wall_seconds=float(np.mean(walls)),
            )
            report.cells.append(stats)
            if echo:
                mean = f"{stats.mean_iterations:.1f}" if iters_ok else "-"
                print(
                    f"NC={nc} NR={nr}: {successes}/{spec.runs} found,"
                    f" mean iterations {mean}",
                    flush=True,
                )
            cell_index += 1
    return report


def grid_csv(report: GridReport) -> str:
    buf = _stdio.StringIO()
    writer = csv.writer(buf)
    writer.writerow(
        ["m", "N", "T", "NC", "NR", "run_index", "seed", "success", "iterations", "wall_seconds"]
    )
    for row in report.rows:
        writer.writerow(
            [
                row["m"],
                row["N"],
                row["T"],
                row["NC"],
                row["NR"],
                row["run_index"],
                row["seed"],
                int(row["success"]),
                row["iterations"],
                f"{row['wall_seconds']:.6f}",
            ]
        )
    return buf.getvalue()


def write_grid_csv(report: GridReport, path) -> None:
    with open(path, "w", encoding="ascii") as handle:
        handle.write(grid_csv(report))


def format_grid_table(report: GridReport) -> str:
    """Aligned table: rows NR, columns NC, mean iterations over successes.

    A '*' marks cells where some runs failed; '-' marks cells with no
    success at all (failed runs never enter the means).
    """
    spec = report.spec
    header = [
        f"order {spec.order}, N={spec.population} (population {4 * spec.population}),"
        f" T={spec.max_iterations}, fitness {spec.fitness}, {spec.runs} runs/cell",
        "mean iterations over successful runs ('*': some runs failed, '-': none succeeded)",
        "",
    ]
    width = 10
    head = "NR \\ NC".ljust(8) + "".join(f"NC={nc}".rjust(width) for nc in spec.nc_values)
    lines = [head]
    for nr in spec.nr_values:
        cells = []
        for nc in spec.nc_values:
            stats = report.cell(nc, nr)
            if stats.mean_iterations is None:
                text = "-"
            else:
                text = f"{stats.mean_iterations:.1f}"
                if stats.successes < stats.runs:
                    text += "*"
            cells.append(text.rjust(width))
        lines.append(f"NR={nr}".ljust(8) + "".join(cells))
    counts = ["", "successes per cell:"]
    for nr in spec.nr_values:
        row = [f"{report.cell(nc, nr).successes}/{report.cell(nc, nr).runs}".rjust(width) for nc in spec.nc_values]
        counts.append(f"NR={nr}".ljust(8) + "".join(row))
    return "\n".join(header + lines + counts)


@dataclass
class FitnessTiming:
    order: int
    population: int
    iterations: int
    seconds_f1: float
    seconds_f2: float

    @property
    def ratio(self) -> float:
        """f2 time over f1 time (< 1 means f2 is faster)."""
        return self.seconds_f2 / self.seconds_f1


def _timed_loop(config: GAConfig, iterations: int, workers: int) -> float:
    """Wall time of exactly `iterations` generations (no early stop)."""
    state = engine.initial_state(config, workers=workers)
    start = time.perf_counter()
    for _ in range(iterations):
        engine.step(state, workers=workers)
    return time.perf_counter() - start


def bench_fitness(
    orders,
    population: int = 1000,
    iterations: int = 1000,
    mutation_cols: int = 4,
    mutation_row_pairs: int = 2,
    seed: int = 2024,
    workers: int = 1,
) -> list[FitnessTiming]:
    """Time the generation loop under f1 and f2 with identical seeds.

    Both legs start from the same initial population and draw identical
    random plans each generation; they diverge only through the fitness
    values driving selection. Legs run the full iteration count even if a
    Hadamard matrix appears, so the timings stay comparable. Defaults are
    desk scale (4N = 4 * population matrices, 10**3 iterations).
    """
    results = []
    # Warm up the BLAS thread pool so the first leg is not penalized.
    w = np.ones((64, 16, 16), dtype=np.float32)
    np.matmul(w.transpose(0, 2, 1), w)
    for order in orders:
        times = {}
        for fitness in ("f1", "f2"):
            config = GAConfig(
                order=order,
                population=population,
                max_iterations=max(iterations, 1),
                mutation_cols=mutation_cols,
                mutation_row_pairs=mutation_row_pairs,
                fitness=fitness,
                mutation="multi",
                seed=seed,
            )
            times[fitness] = _timed_loop(config, iterations, workers)
        results.append(
            FitnessTiming(
                order=order,
                population=population,
                iterations=iterations,
                seconds_f1=times["f1"],
                seconds_f2=times["f2"],
            )
        )
    return results


def format_fitness_table(timings: list[FitnessTiming]) -> str:
    lines = [
        f"{'order':>6} {'matrices':>9} {'iterations':>11} {'f1 (s)':>10} {'f2 (s)':>10} {'f2/f1':>7}"
    ]
    for t in timings:
        lines.append(
            f"{t.order:>6} {4 * t.population:>9} {t.iterations:>11}"
            f" {t.seconds_f1:>10.3f} {t.seconds_f2:>10.3f} {t.ratio:>7.3f}"
        )
    return "\n".join(lines)
