"""Structural matrices: ``J_m``, its zero-inserted variants, ``K_m`` and
the ring identity of the zero-sum matrices."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .errors import ShapeError
from .matrix import FLOAT, RATIONAL, Matrix


@dataclass(frozen=True)
class StructuralOperator:
    """``J_m`` widened by zero columns at the 1-based ``insertions``.

    The realized matrix is ``m x (m + 1 + len(insertions))``.  Non-inserted
    columns carry ``I_m`` from left to right, and the last non-inserted
    column holds the ``-1`` entries.
    """

    m: int
    insertions: tuple = ()

    def __post_init__(self):
        if self.m < 1:
            raise ValueError(f"base dimension must be >= 1, got {self.m}")
        ins = tuple(int(p) for p in self.insertions)
        if len(set(ins)) != len(ins):
            raise ValueError(f"duplicate insertion positions {ins}")
        width = self.m + 1 + len(ins)
        bad = [p for p in ins if not 1 <= p <= width]
        if bad:
            raise ValueError(f"insertion positions {bad} outside 1..{width}")
        object.__setattr__(self, "insertions", tuple(sorted(ins)))

    @property
    def width(self):
        return self.m + 1 + len(self.insertions)

    @property
    def active(self):
        """0-based positions of the non-inserted columns, in order."""
        skip = {p - 1 for p in self.insertions}
        return tuple(j for j in range(self.width) if j not in skip)

    @property
    def dependent(self):
        """0-based position of the ``-1`` column."""
        return self.active[-1]

    def matrix(self, kernel=RATIONAL) -> Matrix:
        return _realize(self.m, self.insertions, kernel)


@lru_cache(maxsize=256)
def _realize(m, insertions, kernel):
    op = StructuralOperator(m, insertions)
    if kernel == RATIONAL:
        a = np.full((m, op.width), Fraction(0), dtype=object)
        one = Fraction(1)
    else:
        a = np.zeros((m, op.width))
        one = 1.0
    active = op.active
    for i in range(m):
        a[i, active[i]] = one
        a[i, active[-1]] = -one
    return Matrix._wrap(a, kernel)


def make_J(m: int) -> StructuralOperator:
    return StructuralOperator(m)


def make_J_inserted(m: int, insertions) -> StructuralOperator:
    return StructuralOperator(m, tuple(insertions))


@dataclass(frozen=True)
class GramPair:
    """``K = J J^T`` (2 on the diagonal, 1 elsewhere), its inverse and a
    lower-triangular float factor ``k`` with ``k @ k.T == K``."""

    K: Matrix
    K_inv: Matrix
    k: Matrix


@lru_cache(maxsize=128)
def make_gram(m: int, kernel=RATIONAL) -> GramPair:
    if m < 1:
        raise ValueError(f"base dimension must be >= 1, got {m}")
    K = Matrix.full(m, m, 1, kernel) + Matrix.identity(m, kernel)
    # K^{-1} = (m+1)^{-1} (m on the diagonal, -1 elsewhere)
    K_inv = Matrix.identity(m, kernel) - Matrix.full(m, m, Fraction(1, m + 1), kernel)
    k = Matrix._wrap(np.linalg.cholesky(K.to_numpy()), FLOAT)
    return GramPair(K, K_inv, k)


def ring_identity(size: int, kernel=RATIONAL) -> Matrix:
    """``I - (1/size) * ones``, the multiplicative identity of the
    ``size x size`` zero-sum matrices."""
    if size < 2:
        raise ShapeError(f"zero-sum matrices need size >= 2, got {size}")
    return Matrix.identity(size, kernel) - Matrix.full(size, size, Fraction(1, size), kernel)
