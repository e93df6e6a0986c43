"""Reference Moore-Penrose inverses and Penrose-condition checks.

:func:`oracle_pinv` uses only a full-rank factorization ``A = F G`` and
``A^+ = G^T (G G^T)^{-1} (F^T F)^{-1} F^T`` (on floats the two factor
pseudoinverses are taken by QR).  It does not depend on any zero-sum
structure, so the structured formulas can be tested against it.
"""

from __future__ import annotations

import os
from dataclasses import dataclass

import numpy as np

from .errors import KernelMismatchError, ShapeError
from .matrix import FLOAT, RATIONAL, Matrix, inverse, rank_profile

DEFAULT_FLOAT_TOL = 1e-9

CONDITIONS = ("AGA = A", "GAG = G", "(AG)^T = AG", "(GA)^T = GA")


def default_tol(kernel):
    """0 for rationals; ``$ZSA_TOL`` or 1e-9 for floats."""
    if kernel == RATIONAL:
        return 0
    return float(os.environ.get("ZSA_TOL", DEFAULT_FLOAT_TOL))


def oracle_pinv(A: Matrix) -> Matrix:
    prof = rank_profile(A)
    if prof.rank == 0:
        return Matrix.zeros(A.cols, A.rows, A.kernel)
    F, G = prof.F, prof.G
    if A.kernel == RATIONAL:
        return G.T @ inverse(G @ G.T) @ inverse(F.T @ F) @ F.T
    # same formula, with F^+ = R^{-1} Q^T from a thin QR instead of the
    # normal equations, which would square the conditioning
    qf, rf = np.linalg.qr(F.array)
    qg, rg = np.linalg.qr(G.array.T)
    f_pinv = np.linalg.solve(rf, qf.T)
    g_pinv = np.linalg.solve(rg, qg.T).T
    return Matrix._wrap(g_pinv @ f_pinv, FLOAT)


def iterative_pinv(A: Matrix, max_iter=200) -> Matrix:
    """Float-only Newton-Schulz iteration ``G <- G (2I - A G)``.

    Starting from ``A^T / (|A|_1 |A|_inf)`` the iterates converge
    quadratically to ``A^+``.  A rank-deficient float matrix carries
    rounding-level singular values that the iteration would eventually
    start inverting, so it stops as soon as the step size stops shrinking.
    Used as a second path independent of the echelon factorization.
    """
    a = A.to_numpy()
    if not a.any():
        return Matrix.zeros(A.cols, A.rows, FLOAT)
    g = a.T / (np.abs(a).sum(axis=0).max() * np.abs(a).sum(axis=1).max())
    eye = np.eye(a.shape[0])
    prev = np.inf
    for _ in range(max_iter):
        nxt = g @ (2 * eye - a @ g)
        step = np.abs(nxt - g).max() / np.abs(nxt).max()
        if step >= prev and prev < 1e-6:
            break
        g, prev = nxt, step
    return Matrix._wrap(g, FLOAT)


def one_inverse(A: Matrix, W: Matrix) -> Matrix:
    """``A^+ + (I - A^+ A) W``: satisfies ``A G A = A`` for any ``W``."""
    P = oracle_pinv(A)
    return P + (Matrix.identity(A.cols, A.kernel) - P @ A) @ W


@dataclass(frozen=True)
class PenroseReport:
    """Residuals of the four Penrose conditions for a candidate ``G``.

    ``residuals`` are max-norm residuals made scale-free: condition 1 is
    divided by ``|A|``, condition 2 by ``|G|``; the symmetry conditions
    involve only the dimensionless products ``AG`` and ``GA`` and are left
    as they are.  On the rational kernel they are exact Fractions and
    ``tol`` is 0.
    """

    residuals: tuple
    tol: float
    kernel: str

    @property
    def passed(self):
        return tuple(r <= self.tol for r in self.residuals)

    @property
    def ok(self):
        return all(self.passed)

    @property
    def max_residual(self):
        return float(max(self.residuals))

    def lines(self):
        out = []
        for name, r, p in zip(CONDITIONS, self.residuals, self.passed):
            out.append(f"{name:<12} residual {float(r):.3e}  {'pass' if p else 'FAIL'}")
        return out

    def __str__(self):
        return "\n".join(self.lines())


def _scaled(diff, scale):
    d = diff.max_norm()
    return d / scale if scale else d


def penrose_check(A: Matrix, G: Matrix, tol=None) -> PenroseReport:
    if A.kernel != G.kernel:
        raise KernelMismatchError("penrose_check needs matching kernels")
    if G.shape != (A.cols, A.rows):
        raise ShapeError(f"G must be {A.cols}x{A.rows} for a {A.rows}x{A.cols} A, got {G.shape}")
    tol = default_tol(A.kernel) if tol is None else tol
    AG, GA = A @ G, G @ A
    res = (
        _scaled(AG @ A - A, A.max_norm()),
        _scaled(GA @ G - G, G.max_norm()),
        (AG.T - AG).max_norm(),
        (GA.T - GA).max_norm(),
    )
    if A.kernel == FLOAT:
        res = tuple(float(r) for r in res)
    return PenroseReport(res, tol, A.kernel)


def is_pseudoinverse(A: Matrix, G: Matrix, tol=None) -> bool:
    """True when ``A G A = A`` (the first Penrose condition only)."""
    return penrose_check(A, G, tol).passed[0]
