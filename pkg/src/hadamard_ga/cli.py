"""Command-line interface.

Subcommands: search (run the genetic search), verify (check a matrix
file), sylvester (emit a power-of-two Hadamard matrix), bench (grid and
fitness-timing experiments).

Exit codes: 0 success / verified, 1 bad flags or unreadable input,
2 search budget exhausted without success, 3 matrix is not Hadamard.
"""

from __future__ import annotations

import argparse
import os
import sys

import numpy as np

from . import bench as benchmod
from . import core
from . import io as formats
from .engine import GAConfig, run_search
from .rand import MASK64, random_seed

__all__ = ["main", "run"]

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_EXHAUSTED = 2
EXIT_NOT_HADAMARD = 3

_SEED_ENV = "HADAMARD_GA_SEED"


class _Parser(argparse.ArgumentParser):
    # argparse exits 2 on bad flags; this CLI reserves 2 for exhausted
    # searches, so usage errors exit 1 instead.
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def _parse_seed(text: str) -> int:
    try:
        value = int(text, 16) if text.lower().startswith("0x") else int(text, 10)
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid seed {text!r}") from None
    if value < 0:
        raise argparse.ArgumentTypeError("seed must be nonnegative")
    return value & MASK64


def _parse_int_list(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(part) for part in text.split(",") if part != "")
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid integer list {text!r}") from None


def _default_seed() -> int:
    env = os.environ.get(_SEED_ENV)
    if env is not None:
        return _parse_seed(env)
    return random_seed()


def _resolve_order(args) -> int | None:
    order = args.order if args.order is not None else 4 * args.k
    if order % 4 != 0 or order < 4:
        print(
            f"error: order must be a multiple of 4 (got {order});"
            " Hadamard matrices of order > 2 require order = 4k",
            file=sys.stderr,
        )
        return None
    return order


def cmd_search(args) -> int:
    order = _resolve_order(args)
    if order is None:
        return EXIT_USAGE
    seed = args.seed if args.seed is not None else _default_seed()
    try:
        config = GAConfig(
            order=order,
            population=args.population,
            max_iterations=args.max_iter,
            mutation_cols=args.nc,
            mutation_row_pairs=args.nr,
            fitness=args.fitness,
            mutation=args.mutation,
            seed=seed,
            stall_window=args.stall_window,
            time_budget_secs=args.time_budget_secs,
        )
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE

    record = run_search(config, workers=args.workers)
    print(formats.format_summary(record))
    if args.trace:
        formats.write_trace(record.trace, args.trace)
        print(f"trace written to {args.trace}")
    if args.out:
        formats.write_run_record(record, args.out, trace_path=args.trace)
        print(f"run record written to {args.out}")
    if record.success:
        print(formats.write_matrix(record.best_matrix), end="")
        return EXIT_OK
    return EXIT_EXHAUSTED


def _read_matrix_arg(path: str) -> np.ndarray:
    if path == "-":
        return formats.parse_matrix(sys.stdin.read())
    return formats.load_matrix(path)


def cmd_verify(args) -> int:
    try:
        matrix = _read_matrix_arg(args.path)
    except (OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    g = core.gram(matrix)
    off = g.copy()
    np.fill_diagonal(off, 0)
    print(f"order: {matrix.shape[0]}")
    print(f"fitness_f1: {core.fitness_f1(matrix)}")
    print(f"fitness_f2: {core.fitness_f2(matrix)}")
    print(f"max_abs_offdiagonal_gram: {int(np.abs(off).max())}")
    if core.is_hadamard(matrix):
        print("hadamard: yes")
        return EXIT_OK
    print("hadamard: no")
    return EXIT_NOT_HADAMARD


def cmd_sylvester(args) -> int:
    try:
        matrix = core.sylvester(args.power)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    text = formats.write_matrix(matrix)
    if args.out:
        with open(args.out, "w", encoding="ascii") as handle:
            handle.write(text)
    else:
        print(text, end="")
    return EXIT_OK


def cmd_bench_grid(args) -> int:
    order = _resolve_order(args)
    if order is None:
        return EXIT_USAGE
    try:
        spec = benchmod.GridSpec(
            order=order,
            population=args.population,
            max_iterations=args.max_iter,
            nc_values=args.nc_values,
            nr_values=args.nr_values,
            runs=args.runs,
            fitness=args.fitness,
            seed_base=args.seed_base,
        )
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    report = benchmod.run_grid(spec, workers=args.workers, echo=True)
    print()
    print(benchmod.format_grid_table(report))
    if args.csv:
        benchmod.write_grid_csv(report, args.csv)
        print(f"\nper-run rows written to {args.csv}")
    return EXIT_OK


def cmd_bench_fitness(args) -> int:
    for order in args.orders:
        if order % 4 != 0 or order < 4:
            print(f"error: order must be a multiple of 4 (got {order})", file=sys.stderr)
            return EXIT_USAGE
    population = args.population
    iterations = args.iterations
    if args.long:
        population, iterations = 10_000, 10_000
    timings = benchmod.bench_fitness(
        args.orders,
        population=population,
        iterations=iterations,
        seed=args.seed,
        workers=args.workers,
    )
    print(benchmod.format_fitness_table(timings))
    if args.csv:
        with open(args.csv, "w", encoding="ascii") as handle:
            handle.write("m,matrices,iterations,f1_seconds,f2_seconds,ratio\n")
            for t in timings:
                handle.write(
                    f"{t.order},{4 * t.population},{t.iterations},"
                    f"{t.seconds_f1:.6f},{t.seconds_f2:.6f},{t.ratio:.6f}\n"
                )
        print(f"timings written to {args.csv}")
    return EXIT_OK


def _add_order_flags(parser):
    group = parser.add_mutually_exclusive_group(required=True)
    group.add_argument("--order", type=int, help="matrix order m (a multiple of 4)")
    group.add_argument("--k", type=int, help="order as m = 4k")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="hadamard-ga", description="Genetic search for Hadamard matrices.")
    sub = parser.add_subparsers(dest="command", required=True)

    search = sub.add_parser("search", help="run one genetic search")
    _add_order_flags(search)
    search.add_argument("--population", type=int, default=1000,
                        help="pair count N; the engine keeps 4N matrices (default 1000)")
    search.add_argument("--max-iter", type=int, default=100_000,
                        help="iteration budget T (default 100000)")
    search.add_argument("--nc", type=int, default=1, help="columns mutated per offspring (default 1)")
    search.add_argument("--nr", type=int, default=2, help="row pairs tried per column (default 2)")
    search.add_argument("--fitness", choices=["f1", "f2"], default="f2")
    search.add_argument("--mutation", choices=["shared", "per-matrix", "multi"], default="multi")
    search.add_argument("--seed", type=_parse_seed, default=None,
                        help=f"decimal or 0x-hex; default from ${_SEED_ENV} or OS entropy")
    search.add_argument("--out", help="write the JSON run record here")
    search.add_argument("--trace", help="write the min-fitness trace CSV here")
    search.add_argument("--stall-window", type=int, default=None,
                        help="reinitialize offspring after this many flat generations")
    search.add_argument("--time-budget-secs", type=float, default=None)
    search.add_argument("--workers", type=int, default=1,
                        help="evaluation worker threads; never changes results")
    search.set_defaults(func=cmd_search)

    verify = sub.add_parser("verify", help="check whether a matrix file is Hadamard")
    verify.add_argument("path", help="matrix text file, or - for stdin")
    verify.set_defaults(func=cmd_verify)

    sylv = sub.add_parser("sylvester", help="emit the order-2^power doubling-construction matrix")
    sylv.add_argument("--power", type=int, required=True)
    sylv.add_argument("--out", help="output file (default stdout)")
    sylv.set_defaults(func=cmd_sylvester)

    benchp = sub.add_parser("bench", help="experiment harness")
    bench_sub = benchp.add_subparsers(dest="bench_command", required=True)

    grid = bench_sub.add_parser("grid", help="NC x NR iteration-count grid")
    _add_order_flags(grid)
    grid.add_argument("--population", type=int, default=1000)
    grid.add_argument("--max-iter", type=int, default=10_000)
    grid.add_argument("--nc-values", type=_parse_int_list, default=(1, 2, 3, 4))
    grid.add_argument("--nr-values", type=_parse_int_list, default=(1, 2, 3, 4))
    grid.add_argument("--runs", type=int, default=10, help="runs per cell (default 10)")
    grid.add_argument("--fitness", choices=["f1", "f2"], default="f2")
    grid.add_argument("--seed-base", type=_parse_seed, default=0)
    grid.add_argument("--csv", help="write per-run rows here")
    grid.add_argument("--workers", type=int, default=1)
    grid.set_defaults(func=cmd_bench_grid)

    fit = bench_sub.add_parser("fitness", help="f1 vs f2 loop-timing comparison")
    fit.add_argument("--orders", type=_parse_int_list, default=(20, 40))
    fit.add_argument("--population", type=int, default=1000)
    fit.add_argument("--iterations", type=int, default=1000)
    fit.add_argument("--long", action="store_true",
                     help="full-scale mode: 40000 matrices, 10000 iterations")
    fit.add_argument("--seed", type=_parse_seed, default=2024)
    fit.add_argument("--csv", help="write timings here")
    fit.add_argument("--workers", type=int, default=1)
    fit.set_defaults(func=cmd_bench_fitness)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # raised by -h and by _Parser.error
        code = exc.code
        return code if isinstance(code, int) else EXIT_USAGE
    return args.func(args)


def run() -> None:
    raise SystemExit(main())
