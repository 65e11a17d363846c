"""Shared test helpers: independent oracles and matrix generators.

The oracles below intentionally avoid the library's numpy paths: Gram
entries come from explicit per-pair dot products over Python ints, so
they stay independent of the implementations they check.
"""

from pathlib import Path

import numpy as np
import pytest

FIXTURES = Path(__file__).parent / "fixtures"


def oracle_gram(matrix) -> list[list[int]]:
    """Column dot products via plain Python arithmetic."""
    rows = [[int(v) for v in row] for row in np.asarray(matrix)]
    m = len(rows)
    cols = [[rows[r][c] for r in range(m)] for c in range(m)]
    return [
        [sum(x * y for x, y in zip(cols[i], cols[j])) for j in range(m)]
        for i in range(m)
    ]


def oracle_f1(matrix) -> int:
    g = oracle_gram(matrix)
    m = len(g)
    return sum(abs(v) for row in g for v in row) - m * m


def oracle_f2(matrix) -> int:
    g = oracle_gram(matrix)
    m = len(g)
    return sum(1 for row in g for v in row if v != 0) - m


def random_balanced(rng: np.random.Generator, order: int) -> np.ndarray:
    """A balanced sign matrix drawn with numpy's own RNG (not the library's)."""
    q = np.ones((order, order), dtype=np.int8)
    half = np.array([-1] * (order // 2) + [1] * (order // 2), dtype=np.int8)
    for j in range(1, order):
        q[:, j] = rng.permutation(half)
    return q


def parse_block(text: str) -> np.ndarray:
    """Sign matrix from rows of +/- characters (test fixture literals)."""
    rows = [line.strip() for line in text.strip().splitlines()]
    return np.array(
        [[1 if ch == "+" else -1 for ch in row] for row in rows], dtype=np.int8
    )


@pytest.fixture
def np_rng():
    return np.random.default_rng(20240817)
