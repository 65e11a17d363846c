"""Sign-matrix math: Gram products, fitness measures, Hadamard verification.

A sign matrix is a square numpy array whose entries are all +1 or -1
(int8 by convention). A matrix is Hadamard when its columns are mutually
orthogonal, i.e. when its Gram matrix equals order * identity. Everything
here is a pure function of a single matrix; batched evaluation used by
the search engine lives in `engine`.
"""

from __future__ import annotations

import numpy as np

__all__ = [
    "SYLVESTER_MAX_POWER",
    "as_sign_matrix",
    "is_balanced",
    "gram",
    "fitness_f1",
    "fitness_f2",
    "is_hadamard",
    "sylvester",
]

# Cap for the doubling construction: 2**10 = 1024 keeps fixtures cheap.
SYLVESTER_MAX_POWER = 10


def as_sign_matrix(matrix) -> np.ndarray:
    """Validate `matrix` as a square +1/-1 matrix and return it as int8.

    Raises ValueError for non-square input or entries outside {+1, -1}.
    """
    q = np.asarray(matrix)
    if q.ndim != 2 or q.shape[0] != q.shape[1] or q.shape[0] < 1:
        raise ValueError(f"expected a square matrix, got shape {q.shape}")
    if not np.isin(q, (-1, 1)).all():
        bad = q[~np.isin(q, (-1, 1))].ravel()[0]
        raise ValueError(f"matrix entries must be +1 or -1, found {bad!r}")
    return q.astype(np.int8, copy=False)


def is_balanced(matrix) -> bool:
    """True when the matrix meets the search population contract.

    Requires order divisible by 4, an all-+1 first column, and equally
    many +1 and -1 entries in every other column (which makes those
    columns orthogonal to the first one).
    """
    q = as_sign_matrix(matrix)
    m = q.shape[0]
    if m % 4 != 0:
        return False
    if not (q[:, 0] == 1).all():
        return False
    return bool((q[:, 1:].sum(axis=0, dtype=np.int64) == 0).all())


def gram(matrix) -> np.ndarray:
    """Column Gram matrix: entry (i, j) is the dot product of columns i and j.

    Exact integer arithmetic (int32); the diagonal is always the order m,
    and entries share the parity of m with magnitude at most m.
    """
    q = as_sign_matrix(matrix)
    w = q.astype(np.int32)
    return w.T @ w


def fitness_f1(matrix) -> int:
    """Total absolute off-diagonal mass of the Gram matrix.

    Sum of |gram| over all entries minus m**2; zero exactly for Hadamard
    matrices, positive otherwise.
    """
    g = gram(matrix)
    m = g.shape[0]
    return int(np.abs(g).sum(dtype=np.int64)) - m * m


def fitness_f2(matrix) -> int:
    """Count of non-orthogonal column pairs (with symmetry).

    Number of nonzero Gram entries minus m; zero exactly for Hadamard
    matrices. Cheaper than `fitness_f1` and used as the default search
    objective.
    """
    g = gram(matrix)
    return int(np.count_nonzero(g)) - g.shape[0]


def is_hadamard(matrix) -> bool:
    """True when all off-diagonal Gram entries vanish (gram == m * I)."""
    g = gram(matrix)
    # The diagonal is always m >= 1, so exactly m nonzeros means diagonal.
    return int(np.count_nonzero(g)) == g.shape[0]


def sylvester(power: int, max_power: int = SYLVESTER_MAX_POWER) -> np.ndarray:
    """Order-2**power Hadamard matrix by the doubling construction.

    H(1) = [[1]] and H(2n) = [[H, H], [H, -H]]. Used as a deterministic
    test oracle; `power` above `max_power` raises ValueError.
    """
    if power < 0:
        raise ValueError("power must be nonnegative")
    if power > max_power:
        raise ValueError(f"power {power} exceeds size limit {max_power}")
    h = np.ones((1, 1), dtype=np.int8)
    block = np.array([[1, 1], [1, -1]], dtype=np.int8)
    for _ in range(power):
        h = np.kron(block, h)
    return h
