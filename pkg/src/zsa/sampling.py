"""Random fixtures with controlled shape and rank.

All generators take a :class:`numpy.random.Generator`, so a seed fixes the
whole stream.  Entries are small rationals ``p/q`` with ``q`` in 1..3.
"""

from __future__ import annotations

from fractions import Fraction

import numpy as np

from .matrix import RATIONAL, Matrix, rank
from .ring import ZeroSumMatrix, lift
from .structural import StructuralOperator


# smallest nonzero singular value for float-kernel fixtures; keeps the
# condition number near 1e3 and every singular value squared above the
# largest default regularization value
WELL_CONDITIONED = 0.1


def random_matrix(rng, rows, cols, kernel=RATIONAL, max_num=4, max_den=3):
    nums = rng.integers(-max_num, max_num + 1, size=(rows, cols))
    dens = rng.integers(1, max_den + 1, size=(rows, cols))
    entries = [[Fraction(int(p), int(q)) for p, q in zip(rn, rd)] for rn, rd in zip(nums, dens)]
    return Matrix(entries, RATIONAL).astype(kernel)


def random_rank(rng, rows, cols, r, kernel=RATIONAL, min_sv=None, max_tries=1000):
    """A ``rows x cols`` matrix of rank exactly ``r``, built as ``F @ G``.

    ``min_sv`` rejects draws whose smallest nonzero singular value is
    below it, for fixtures that must stay well conditioned in binary64.
    """
    if not 0 <= r <= min(rows, cols):
        raise ValueError(f"rank {r} impossible for a {rows}x{cols} matrix")
    if r == 0:
        return Matrix.zeros(rows, cols, kernel)
    for _ in range(max_tries):
        A = random_matrix(rng, rows, r) @ random_matrix(rng, r, cols)
        if rank(A) != r:
            continue
        if min_sv is not None and np.linalg.svd(A.to_numpy(), compute_uv=False)[r - 1] < min_sv:
            continue
        return A.astype(kernel)
    raise RuntimeError("could not draw a matrix of the requested rank")


def random_full_rank(rng, n, kernel=RATIONAL, min_sv=None):
    return random_rank(rng, n, n, n, kernel, min_sv)


def random_insertions(rng, m, count):
    """``count`` distinct 1-based zero positions for a ``J_m`` widened by ``count``."""
    width = m + 1 + count
    return tuple(sorted(int(p) + 1 for p in rng.choice(width, size=count, replace=False)))


def random_member(rng, n, r=None, kernel=RATIONAL, cols=None, insert_rows=0, insert_cols=0,
                  min_sv=None):
    """Lift of a random ``n x cols`` representative of rank ``r``."""
    cols = n if cols is None else cols
    r = min(n, cols) if r is None else r
    X = random_rank(rng, n, cols, r, kernel, min_sv)
    row_op = StructuralOperator(n, random_insertions(rng, n, insert_rows))
    col_op = StructuralOperator(cols, random_insertions(rng, cols, insert_cols))
    return lift(X, row_op, col_op)


def random_zero_sum(rng, size, kernel=RATIONAL) -> ZeroSumMatrix:
    """Any member of the ``size x size`` zero-sum matrices (rank unconstrained)."""
    return lift(random_matrix(rng, size - 1, size - 1, kernel))
