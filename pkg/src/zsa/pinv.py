"""Closed-form Moore-Penrose inverses of zero-sum matrices.

Every routine returns a :class:`PinvResult` carrying the inverse, the name
of the formula used and a :class:`~zsa.oracle.PenroseReport` against the
input.  Formulas that only use rational operations stay exact on the
rational kernel.  The Cholesky-based formulas run on floats, because the
factor of ``K_m`` is irrational.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .errors import (
    IdentityViolation,
    NonConvergenceError,
    PreconditionError,
    RankDeficientError,
    ShapeError,
)
import numpy as np

from .matrix import (
    FLOAT,
    RATIONAL,
    Matrix,
    common_denominator,
    fraction_free_solve,
    inverse,
    rank,
    rank_profile,
    to_fraction,
)
from .oracle import PenroseReport, _scaled, default_tol, oracle_pinv, penrose_check
from .ring import ZeroSumMatrix, lift, twisted_product, validate_membership
from .structural import StructuralOperator, make_gram

FULL_RANK = "full-rank-square"
CHOLESKY = "cholesky"
LIMIT = "limit"
NONSQUARE = "nonsquare"
ROWS_ONLY = "rows-only"
COLS_ONLY = "cols-only"
ZERO_INSERTED = "zero-inserted"
METHODS = (FULL_RANK, CHOLESKY, LIMIT, NONSQUARE, ROWS_ONLY, COLS_ONLY, ZERO_INSERTED)


@dataclass(frozen=True)
class LimitSchedule:
    """Strictly decreasing positive regularization values.

    Values are stored as exact fractions of their decimal spelling, so
    ``1e-3`` is exactly ``1/1000``.
    """

    deltas: tuple = ()
    tol: float = 1e-8

    def __post_init__(self):
        ds = tuple(to_fraction(str(d)) if isinstance(d, float) else to_fraction(d)
                   for d in (self.deltas or _default_deltas()))
        if len(ds) < 2:
            raise ValueError("a limit schedule needs at least two values")
        if any(d <= 0 for d in ds):
            raise ValueError("schedule values must be positive")
        if any(b >= a for a, b in zip(ds, ds[1:])):
            raise ValueError("schedule values must be strictly decreasing")
        object.__setattr__(self, "deltas", ds)

    @classmethod
    def geometric(cls, start="1e-3", ratio=10, count=6, tol=1e-8):
        start = to_fraction(start)
        return cls(tuple(start / Fraction(ratio) ** k for k in range(count)), tol)

    @classmethod
    def parse(cls, text, tol=1e-8):
        """From a comma-separated list such as ``"1e-3,1e-4,1e-5"``."""
        return cls(tuple(Fraction(t.strip()) for t in text.split(",") if t.strip()), tol)


def _default_deltas():
    return tuple(Fraction(1, 10 ** (3 + k)) for k in range(6))


@dataclass(frozen=True)
class LimitTrace:
    """What the regularization sweep saw.

    ``iterates`` are the widened matrices at each delta; ``differences``
    the max-norm gaps between consecutive iterates; ``contractions`` the
    ratios of consecutive gaps.  ``estimates`` are the extrapolations to
    delta = 0 using the last 1, 2, ... schedule points, and
    ``error_estimate`` the relative gap between the final two of them.
    """

    deltas: tuple
    iterates: tuple
    differences: tuple
    contractions: tuple
    estimates: tuple
    error_estimate: float


@dataclass(frozen=True)
class PinvResult:
    pinv: Matrix
    method: str
    report: PenroseReport
    trace: LimitTrace | None = field(default=None, compare=False)

    @property
    def ok(self):
        return self.report.ok


def _result(Xt_widened, pinv, method, tol=None, trace=None):
    return PinvResult(pinv, method, penrose_check(Xt_widened, pinv, tol), trace)


# -- square, invertible representative ------------------------------------


def _inverse_formula(zs):
    X = zs.compressed
    K_inv = make_gram(X.rows, X.kernel).K_inv
    core = K_inv @ inverse(X) @ K_inv
    return zs.col_op.matrix(X.kernel).T @ core @ zs.row_op.matrix(X.kernel)


def pinv_full_rank(zs: ZeroSumMatrix) -> PinvResult:
    """``J^T K^{-1} X^{-1} K^{-1} J`` for a square member of full rank.

    The result is also the unique pseudoinverse lying in the zero-sum
    ring, and ``Xt @ Xt^+ == Xt^+ @ Xt == ring_identity``.
    """
    X = zs.compressed
    if zs.has_insertions:
        raise PreconditionError("input has zero rows/columns; use pinv_zero_inserted")
    if X.rows != X.cols:
        raise PreconditionError(f"input is not square ({zs.shape}); use pinv_nonsquare")
    r = rank(X)
    if r < X.rows:
        raise RankDeficientError(
            f"compressed representative has rank {r} < {X.rows}; use pinv_cholesky or pinv_limit",
            rank=r, required=X.rows,
        )
    return _result(zs.widened, _inverse_formula(zs), FULL_RANK)


def pinv_zero_inserted(zs: ZeroSumMatrix) -> PinvResult:
    """``J_{m,a}^T K_m^{-1} X^{-1} K_m^{-1} J_{m,b}`` for ``Xt = J_{m,b}^T X J_{m,a}``.

    Needs a square, invertible ``m x m`` representative; the widened matrix
    itself may be rectangular when ``a`` and ``b`` differ in length.
    """
    X = zs.compressed
    if X.rows != X.cols:
        raise PreconditionError(
            f"compressed representative is {X.shape}; the zero-inserted formula needs it square"
        )
    r = rank(X)
    if r < X.rows:
        raise RankDeficientError(
            f"compressed representative has rank {r} < {X.rows}", rank=r, required=X.rows
        )
    return _result(zs.widened, _inverse_formula(zs), ZERO_INSERTED)


# -- Cholesky-conjugated formula (floats) ---------------------------------


def _cholesky_formula(zs):
    X = zs.compressed.to_float()
    m, n = X.shape
    km, kn = make_gram(m, FLOAT).k, make_gram(n, FLOAT).k
    inner = oracle_pinv(km.T @ X @ kn)
    core = inverse(kn).T @ inner @ inverse(km)
    return zs.col_op.matrix(FLOAT).T @ core @ zs.row_op.matrix(FLOAT)


def pinv_cholesky(zs: ZeroSumMatrix, tol=None) -> PinvResult:
    """``J^T k^{-T} (k^T X k)^+ k^{-1} J`` with ``K = k k^T``; any rank.

    Float kernel; the inner pseudoinverse comes from :func:`oracle_pinv`.
    """
    if zs.compressed.rows != zs.compressed.cols:
        raise PreconditionError(
            f"compressed representative is {zs.compressed.shape}; use pinv_nonsquare"
        )
    return _result(zs.widened.to_float(), _cholesky_formula(zs), CHOLESKY, tol)


def pinv_nonsquare(zs: ZeroSumMatrix, tol=None) -> PinvResult:
    """``J_n^T k_n^{-T} (k_m^T X k_n)^+ k_m^{-1} J_m`` for an ``m x n`` representative."""
    return _result(zs.widened.to_float(), _cholesky_formula(zs), NONSQUARE, tol)


# -- regularization limit --------------------------------------------------


def _neville_estimates(deltas, values):
    """Extrapolations to 0 from the last 1, 2, ..., N sample points.

    The nodes shrink geometrically, so the combination weights stay small
    and float arithmetic loses only a few ulps here.
    """
    N = len(deltas)
    P = list(values)
    estimates = [P[-1]]
    for j in range(1, N):
        P = [
            (P[i + 1] * deltas[i] - P[i] * deltas[i + j]) / (deltas[i] - deltas[i + j])
            for i in range(N - j)
        ]
        estimates.append(P[-1])
    return estimates


def _rel(diff, ref):
    d, s = float(np.abs(diff).max()), float(np.abs(ref).max())
    return d / s if s else d


def _integer_representative(X):
    """``(N, d)`` with integer ``N`` and ``X == N / d``, float X taken at numerical rank."""
    if X.kernel == RATIONAL:
        return common_denominator(X)
    # replace X by its thresholded factorization, multiplied out exactly,
    # so rounding noise cannot act as tiny singular values
    prof = rank_profile(X)
    if not prof.rank:
        return np.zeros(X.shape, dtype=object), 1
    Fi, dF = common_denominator(prof.F.to_rational())
    Gi, dG = common_denominator(prof.G.to_rational())
    return Fi @ Gi, dF * dG


def _int_gram(m):
    K = np.ones((m, m), dtype=object)
    for i in range(m):
        K[i, i] = 2
    return K


def pinv_limit(zs: ZeroSumMatrix, schedule: LimitSchedule | None = None, tol=None) -> PinvResult:
    """Moore-Penrose inverse as the ``delta -> 0`` limit of
    ``J_a^T (X^T K_m X K_n + delta I)^{-1} X^T J_b``.

    Each point of the schedule is solved exactly (integer fraction-free
    elimination, then rounded once to float) and the sweep is extrapolated
    to zero by Neville's scheme.  A float input is first replaced by its
    thresholded full-rank factorization ``F @ G`` (see
    :func:`~zsa.matrix.rank_profile`), taken exactly.  The sweep is accepted
    when consecutive gaps shrink by a factor below 0.9 and the
    extrapolation's error estimate is within ``schedule.tol``.  The result
    is always on the float kernel.
    """
    schedule = schedule or LimitSchedule()
    Xi, D = _integer_representative(zs.compressed)
    m, n = Xi.shape
    C = Xi.T @ _int_gram(m) @ Xi @ _int_gram(n)
    rhs = (Xi.T * D).tolist()
    D2 = D * D

    values = []
    for d in schedule.deltas:
        p, q = d.numerator, d.denominator
        # (C/D^2 + p/q I) V = X^T/D  <=>  (q C + p D^2 I) V = q D X^T
        M = C * q
        for i in range(n):
            M[i, i] += p * D2
        N, det = fraction_free_solve(M.tolist(), [[q * v for v in row] for row in rhs])
        values.append(np.array([[v / det for v in row] for row in N], dtype=np.float64))

    diffs = [float(np.abs(b - a).max()) for a, b in zip(values, values[1:])]
    contractions = []
    for a, b in zip(diffs, diffs[1:]):
        contractions.append(b / a if a else (0.0 if b == 0 else float("inf")))
    fdeltas = [float(d) for d in schedule.deltas]
    estimates = _neville_estimates(fdeltas, values)
    err = _rel(estimates[-1] - estimates[-2], estimates[-1])

    Ja = zs.col_op.matrix(FLOAT).array
    Jb = zs.row_op.matrix(FLOAT).array

    def widen(v):
        return Matrix._wrap(Ja.T @ v @ Jb, FLOAT)

    trace = LimitTrace(
        deltas=tuple(fdeltas),
        iterates=tuple(widen(v) for v in values),
        differences=tuple(diffs),
        contractions=tuple(contractions),
        estimates=tuple(widen(e) for e in estimates),
        error_estimate=err,
    )
    if any(c >= 0.9 for c in contractions):
        raise NonConvergenceError(
            "regularized iterates are not contracting along the schedule; "
            "try smaller deltas",
            residuals=trace.differences,
        )
    if err > schedule.tol:
        raise NonConvergenceError(
            f"extrapolated limit has error estimate {err:.3e} > {schedule.tol:.1e}",
            residuals=trace.differences,
        )
    return _result(zs.widened.to_float(), trace.estimates[-1], LIMIT, tol, trace)


# -- one-sided zero sums ---------------------------------------------------


def _left_pinv(X):
    return inverse(X.T @ X) @ X.T


def _right_pinv(X):
    return X.T @ inverse(X @ X.T)


def pinv_rows_only(X: Matrix, n: int | None = None) -> PinvResult:
    """``(X J_n)^+ = J_n^T K_n^{-1} X^+`` for left-invertible ``X``.

    ``X J_n`` has zero row sums only.  Exact on rationals, with
    ``X^+ = (X^T X)^{-1} X^T``.
    """
    n = X.cols if n is None else n
    if n != X.cols:
        raise ShapeError(f"X has {X.cols} columns, expected n={n}")
    r = rank(X)
    if r != X.cols:
        raise RankDeficientError(
            f"X ({X.rows}x{X.cols}) has rank {r}; rows-only formula needs it left-invertible",
            rank=r, required=X.cols,
        )
    J = StructuralOperator(n).matrix(X.kernel)
    pinv = J.T @ make_gram(n, X.kernel).K_inv @ _left_pinv(X)
    return _result(X @ J, pinv, ROWS_ONLY)


def pinv_cols_only(X: Matrix, n: int | None = None) -> PinvResult:
    """``(J_n^T X)^+ = X^+ K_n^{-1} J_n`` for right-invertible ``X``."""
    n = X.rows if n is None else n
    if n != X.rows:
        raise ShapeError(f"X has {X.rows} rows, expected n={n}")
    r = rank(X)
    if r != X.rows:
        raise RankDeficientError(
            f"X ({X.rows}x{X.cols}) has rank {r}; cols-only formula needs it right-invertible",
            rank=r, required=X.rows,
        )
    J = StructuralOperator(n).matrix(X.kernel)
    pinv = _right_pinv(X) @ make_gram(n, X.kernel).K_inv @ J
    return _result(J.T @ X, pinv, COLS_ONLY)


def _check_zero(values, tol, what):
    bad = [i + 1 for i, s in enumerate(values) if (s != 0 if tol is None else abs(s) > tol)]
    if bad:
        raise PreconditionError(f"nonzero {what} sums at " + ", ".join(map(str, bad)))


def split_rows_only(Xt: Matrix) -> Matrix:
    """``X`` with ``Xt = X @ J_n``, for ``Xt`` whose rows sum to zero."""
    tol = None if Xt.kernel == RATIONAL else 1e-12 * float(Xt.max_norm())
    _check_zero(Xt.row_sums(), tol, "row")
    if Xt.cols < 2:
        raise ShapeError("need at least two columns")
    return Xt[:, : Xt.cols - 1]


def split_cols_only(Xt: Matrix) -> Matrix:
    """``X`` with ``Xt = J_n^T @ X``, for ``Xt`` whose columns sum to zero."""
    tol = None if Xt.kernel == RATIONAL else 1e-12 * float(Xt.max_norm())
    _check_zero(Xt.col_sums(), tol, "column")
    if Xt.rows < 2:
        raise ShapeError("need at least two rows")
    return Xt[: Xt.rows - 1, :]


# -- projector identities ---------------------------------------------------


def projector(zs: ZeroSumMatrix) -> Matrix:
    """``Xt^+ Xt`` in closed form, ``J_{m,a}^T (I_m - ones/(m+1)) J_{m,a}``.

    The product ``Xt^+ @ Xt`` is also formed directly and must agree
    (exactly on rationals).
    """
    X = zs.compressed
    m = X.rows
    direct = pinv_zero_inserted(zs).pinv @ zs.widened
    Ja = zs.col_op.matrix(X.kernel)
    closed = Ja.T @ (Matrix.identity(m, X.kernel) - Matrix.full(m, m, Fraction(1, m + 1), X.kernel)) @ Ja
    same = direct == closed if X.kernel == RATIONAL else direct.allclose(closed, default_tol(FLOAT))
    if not same:
        raise IdentityViolation("direct and closed-form projectors disagree")
    return closed


def projector_fixes(M: Matrix, insert_cols, zs: ZeroSumMatrix) -> bool:
    """Whether ``Xt^+ Xt`` fixes ``J_{m,a}^T M``."""
    op = StructuralOperator(M.rows, tuple(insert_cols))
    if op != zs.col_op:
        raise PreconditionError(
            f"M lifts through J_{{{op.m},{op.insertions}}} but the member's column operator "
            f"is J_{{{zs.col_op.m},{zs.col_op.insertions}}}"
        )
    Mt = op.matrix(M.kernel).T @ M
    out = projector(zs) @ Mt
    if M.kernel == RATIONAL:
        return out == Mt
    return out.allclose(Mt, default_tol(FLOAT))


def projector_range_basis(insert_cols, m: int, kernel=RATIONAL) -> Matrix:
    """``J_{m,a}^T``; its ``m`` columns span the range of ``Xt^+ Xt``."""
    return StructuralOperator(m, tuple(insert_cols)).matrix(kernel).T


# -- the twisted ring view ------------------------------------------------


def naive_pinv_counterexample(zs: ZeroSumMatrix) -> PenroseReport:
    """Penrose report for the lift of ``K^{-1} X^+ K^{-1}``.

    This candidate always satisfies the first two conditions but in
    general not the symmetry conditions when ``X`` is singular.
    """
    X = zs.compressed
    Km_inv = make_gram(X.rows, X.kernel).K_inv
    Kn_inv = make_gram(X.cols, X.kernel).K_inv
    core = Kn_inv @ oracle_pinv(X) @ Km_inv
    G = zs.col_op.matrix(X.kernel).T @ core @ zs.row_op.matrix(X.kernel)
    return penrose_check(zs.widened, G)


def twisted_pinv(X: Matrix) -> Matrix:
    """Moore-Penrose inverse of ``X`` under the twisted product.

    Obtained exactly as the representative of ``oracle_pinv(lift(X))``.
    """
    zs = lift(X)
    P = oracle_pinv(zs.widened)
    return validate_membership(P).compressed


def twisted_penrose_check(X: Matrix, G: Matrix, tol=None) -> PenroseReport:
    """Penrose conditions with every product replaced by the twisted one."""
    if G.shape != (X.cols, X.rows):
        raise ShapeError(f"G must be {X.cols}x{X.rows}, got {G.shape}")
    tol = default_tol(X.kernel) if tol is None else tol
    XG = twisted_product(X, G)
    GX = twisted_product(G, X)
    res = (
        _scaled(twisted_product(XG, X) - X, X.max_norm()),
        _scaled(twisted_product(GX, G) - G, G.max_norm()),
        (XG.T - XG).max_norm(),
        (GX.T - GX).max_norm(),
    )
    if X.kernel == FLOAT:
        res = tuple(float(r) for r in res)
    return PenroseReport(res, tol, X.kernel)
