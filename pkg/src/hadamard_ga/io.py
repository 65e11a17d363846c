"""File formats: matrix text blocks, JSON run records, fitness-trace CSV.

All formats are line-oriented ASCII so results stay diffable and human
readable. A matrix file is a header line `hadamard-ga matrix m=<m>`
followed by m rows of m characters from {+, -}.
"""

from __future__ import annotations

import csv
import json
from dataclasses import asdict
from pathlib import Path
from typing import Sequence

import numpy as np

from . import core
from .engine import GAConfig, RunRecord

__all__ = [
    "MatrixFormatError",
    "write_matrix",
    "parse_matrix",
    "save_matrix",
    "load_matrix",
    "run_record_doc",
    "write_run_record",
    "load_run_record",
    "write_trace",
    "read_trace",
    "format_summary",
]

_HEADER_PREFIX = "hadamard-ga matrix m="
_CHAR = {1: "+", -1: "-"}
_SIGN = {"+": 1, "-": -1}


class MatrixFormatError(ValueError):
    """Malformed matrix text; carries 1-based line/column when known."""

    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        where = ""
        if line is not None:
            where = f"line {line}"
            if column is not None:
                where += f", column {column}"
            where += ": "
        super().__init__(where + message)
        self.line = line
        self.column = column


def write_matrix(matrix) -> str:
    """Render a sign matrix as its text block (with trailing newline)."""
    q = core.as_sign_matrix(matrix)
    m = q.shape[0]
    rows = ["".join(_CHAR[int(v)] for v in row) for row in q]
    return f"{_HEADER_PREFIX}{m}\n" + "\n".join(rows) + "\n"


def parse_matrix(text: str) -> np.ndarray:
    """Parse a matrix text block; inverse of `write_matrix`, bit exact."""
    lines = text.splitlines()
    if not lines:
        raise MatrixFormatError("empty input")
    header = lines[0]
    if not header.startswith(_HEADER_PREFIX):
        raise MatrixFormatError(f"expected header {_HEADER_PREFIX!r}<m>", line=1)
    try:
        m = int(header[len(_HEADER_PREFIX) :])
    except ValueError:
        raise MatrixFormatError("header order is not an integer", line=1) from None
    if m < 1:
        raise MatrixFormatError(f"order must be positive, got {m}", line=1)

    body = lines[1:]
    if len(body) < m:
        raise MatrixFormatError(f"expected {m} rows, found {len(body)}")
    for extra in body[m:]:
        if extra.strip():
            raise MatrixFormatError(
                f"expected {m} rows, found trailing content", line=2 + m
            )

    out = np.empty((m, m), dtype=np.int8)
    for i in range(m):
        row = body[i]
        if len(row) != m:
            raise MatrixFormatError(
                f"expected {m} characters, found {len(row)}", line=2 + i
            )
        for j, ch in enumerate(row):
            sign = _SIGN.get(ch)
            if sign is None:
                raise MatrixFormatError(
                    f"invalid character {ch!r}", line=2 + i, column=1 + j
                )
            out[i, j] = sign
    return out


def save_matrix(matrix, path) -> None:
    Path(path).write_text(write_matrix(matrix), encoding="ascii")


def load_matrix(path) -> np.ndarray:
    return parse_matrix(Path(path).read_text(encoding="ascii"))


def run_record_doc(record: RunRecord, trace_path: str | None = None) -> dict:
    """JSON-ready document for a run record.

    `wall_seconds` is informational only; reproducibility comparisons
    must ignore it.
    """
    config = asdict(record.config)
    config["k"] = record.config.k
    return {
        "config": config,
        "seed": record.seed,
        "iterations": record.iterations,
        "final_min_fitness": record.best_fitness,
        "success": record.success,
        "complete": record.complete,
        "wall_seconds": record.wall_seconds,
        "matrix": write_matrix(record.best_matrix),
        "trace_path": trace_path,
    }


def write_run_record(record: RunRecord, path, trace_path: str | None = None) -> None:
    doc = run_record_doc(record, trace_path)
    Path(path).write_text(
        json.dumps(doc, indent=2, sort_keys=True) + "\n", encoding="ascii"
    )


def load_run_record(path) -> tuple[dict, np.ndarray]:
    """Load a run record; re-verifies the matrix when success is claimed."""
    doc = json.loads(Path(path).read_text(encoding="ascii"))
    matrix = parse_matrix(doc["matrix"])
    if doc["success"] and not core.is_hadamard(matrix):
        raise ValueError(f"{path}: record claims success but matrix fails verification")
    return doc, matrix


def write_trace(trace: Sequence[int], path) -> None:
    """Write the per-generation minimum-fitness trace as two-column CSV.

    Row i is (i, trace[i]); the trace must be monotone non-increasing,
    which holds for every engine-produced run.
    """
    values = [int(v) for v in trace]
    for i in range(1, len(values)):
        if values[i] > values[i - 1]:
            raise ValueError(
                f"trace must be monotone non-increasing, rises at iteration {i}"
            )
    with open(path, "w", newline="", encoding="ascii") as handle:
        writer = csv.writer(handle)
        writer.writerow(["iteration", "min_fitness"])
        for i, v in enumerate(values):
            writer.writerow([i, v])


def read_trace(path) -> list[tuple[int, int]]:
    with open(path, newline="", encoding="ascii") as handle:
        reader = csv.reader(handle)
        header = next(reader)
        if header != ["iteration", "min_fitness"]:
            raise ValueError(f"unexpected trace header {header!r}")
        return [(int(row[0]), int(row[1])) for row in reader]


def format_summary(record: RunRecord) -> str:
    """Human-readable run summary, mirrored to stdout by the CLI."""
    config = record.config
    outcome = "Hadamard matrix found" if record.success else "no Hadamard matrix"
    status = "" if record.complete else " (stopped early: time budget)"
    lines = [
        f"order {config.order} | population {config.total} (pairs N={config.population})"
        f" | fitness {config.fitness} | mutation {config.mutation}"
        f" | NC={config.mutation_cols} NR={config.mutation_row_pairs}",
        f"seed {record.seed}",
        f"{outcome} after {record.iterations} iterations"
        f" (min fitness {record.best_fitness}) in {record.wall_seconds:.3f}s{status}",
    ]
    return "\n".join(lines)
