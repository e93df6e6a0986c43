"""Dense matrices over two scalar kernels.

``"rational"`` matrices hold :class:`fractions.Fraction` entries and every
operation on them is exact.  ``"float"`` matrices hold binary64 values and
are backed by plain ``float64`` arrays.  A matrix never mixes kernels;
combining two matrices of different kernels raises
:class:`~zsa.errors.KernelMismatchError`.

Matrices are immutable: the wrapped array is marked read-only and every
operation returns a new object.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational, Real

import numpy as np

from .errors import KernelMismatchError, ShapeError, SingularMatrixError

RATIONAL = "rational"
FLOAT = "float"
KERNELS = (RATIONAL, FLOAT)

# pivots below this fraction of the matrix max-norm count as zero (float kernel)
RANK_RTOL = 1e-10


def to_fraction(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, (bool, np.bool_)):
        raise TypeError("booleans are not matrix entries")
    if isinstance(value, (int, np.integer)):
        return Fraction(int(value))
    if isinstance(value, str):
        return Fraction(value.strip())
    if isinstance(value, Rational):
        return Fraction(value.numerator, value.denominator)
    if isinstance(value, (float, np.floating)):
        if not math.isfinite(value):
            raise ValueError(f"non-finite entry {value!r}")
        return Fraction(float(value))
    raise TypeError(f"cannot interpret {value!r} as a rational number")


def to_float(value) -> float:
    if isinstance(value, str):
        text = value.strip()
        out = float(Fraction(text)) if "/" in text else float(text)
    elif isinstance(value, Real):
        out = float(value)
    else:
        raise TypeError(f"cannot interpret {value!r} as a real number")
    if not math.isfinite(out):
        raise ValueError(f"non-finite entry {value!r}")
    return out


def _check_kernel(kernel):
    if kernel not in KERNELS:
        raise ValueError(f"unknown kernel {kernel!r}; expected one of {KERNELS}")


class Matrix:
    """An immutable dense matrix tagged with its scalar kernel."""

    __slots__ = ("_a", "kernel")

    def __init__(self, entries, kernel=RATIONAL):
        _check_kernel(kernel)
        if isinstance(entries, Matrix):
            entries = entries._a
        rows = [list(r) for r in entries]
        if not rows or not rows[0]:
            raise ShapeError("a matrix needs at least one row and one column")
        width = len(rows[0])
        for i, r in enumerate(rows):
            if len(r) != width:
                raise ShapeError(f"row {i + 1} has {len(r)} entries, expected {width}")
        if kernel == RATIONAL:
            a = np.empty((len(rows), width), dtype=object)
            for i, r in enumerate(rows):
                for j, v in enumerate(r):
                    a[i, j] = to_fraction(v)
        else:
            a = np.array([[to_float(v) for v in r] for r in rows], dtype=np.float64)
        a.flags.writeable = False
        self._a = a
        self.kernel = kernel

    @classmethod
    def _wrap(cls, a, kernel):
        # trusted fast path: `a` already has the right dtype and entry types
        if a.ndim != 2 or 0 in a.shape:
            raise ShapeError(f"bad matrix shape {a.shape}")
        obj = object.__new__(cls)
        if a.flags.writeable:
            a = a.copy() if a.base is not None else a
            a.flags.writeable = False
        obj._a = a
        obj.kernel = kernel
        return obj

    # -- constructors ---------------------------------------------------

    @classmethod
    def zeros(cls, rows, cols, kernel=RATIONAL):
        _check_kernel(kernel)
        if kernel == RATIONAL:
            a = np.full((rows, cols), Fraction(0), dtype=object)
        else:
            a = np.zeros((rows, cols))
        return cls._wrap(a, kernel)

    @classmethod
    def full(cls, rows, cols, value, kernel=RATIONAL):
        _check_kernel(kernel)
        if kernel == RATIONAL:
            a = np.full((rows, cols), to_fraction(value), dtype=object)
        else:
            a = np.full((rows, cols), to_float(value))
        return cls._wrap(a, kernel)

    @classmethod
    def identity(cls, n, kernel=RATIONAL):
        _check_kernel(kernel)
        if kernel == RATIONAL:
            a = np.full((n, n), Fraction(0), dtype=object)
            for i in range(n):
                a[i, i] = Fraction(1)
        else:
            a = np.eye(n)
        return cls._wrap(a, kernel)

    @classmethod
    def from_flat(cls, rows, cols, entries, kernel=RATIONAL):
        entries = list(entries)
        if len(entries) != rows * cols:
            raise ShapeError(f"{len(entries)} entries do not fill a {rows}x{cols} matrix")
        return cls([entries[i * cols:(i + 1) * cols] for i in range(rows)], kernel)

    # -- basic protocol -------------------------------------------------

    @property
    def shape(self):
        return self._a.shape

    @property
    def rows(self):
        return self._a.shape[0]

    @property
    def cols(self):
        return self._a.shape[1]

    @property
    def array(self):
        """Read-only view of the underlying array (object dtype for rationals)."""
        return self._a

    def __getitem__(self, key):
        out = self._a[key]
        if not isinstance(out, np.ndarray):
            return out
        if out.ndim == 1:
            # a[i] and a[i, :] give a row; a[:, j] gives a column
            picks_row = not isinstance(key, tuple) or isinstance(key[0], (int, np.integer))
            out = out.reshape(1, -1) if picks_row else out.reshape(-1, 1)
        return Matrix._wrap(np.array(out), self.kernel)

    def tolist(self):
        return self._a.tolist()

    def flat(self):
        return list(self._a.ravel())

    def to_numpy(self):
        """Float64 copy of the entries, whatever the kernel."""
        return np.array(self._a, dtype=np.float64)

    def astype(self, kernel):
        _check_kernel(kernel)
        if kernel == self.kernel:
            return self
        if kernel == FLOAT:
            return Matrix._wrap(self.to_numpy(), FLOAT)
        return Matrix(self._a.tolist(), RATIONAL)

    def to_float(self):
        return self.astype(FLOAT)

    def to_rational(self):
        return self.astype(RATIONAL)

    def __repr__(self):
        body = ", ".join("[" + ", ".join(_fmt(v) for v in row) + "]" for row in self._a)
        return f"Matrix([{body}], kernel={self.kernel!r})"

    def __str__(self):
        cells = [[_fmt(v) for v in row] for row in self._a]
        width = max(len(c) for row in cells for c in row)
        return "\n".join(" ".join(c.rjust(width) for c in row) for row in cells)

    # -- arithmetic -----------------------------------------------------

    def _same(self, other, what):
        if not isinstance(other, Matrix):
            return NotImplemented
        if other.kernel != self.kernel:
            raise KernelMismatchError(f"cannot {what} {self.kernel} and {other.kernel} matrices")
        return other

    def __add__(self, other):
        other = self._same(other, "add")
        if other is NotImplemented:
            return other
        if other.shape != self.shape:
            raise ShapeError(f"cannot add {self.shape} and {other.shape}")
        return Matrix._wrap(self._a + other._a, self.kernel)

    def __sub__(self, other):
        other = self._same(other, "subtract")
        if other is NotImplemented:
            return other
        if other.shape != self.shape:
            raise ShapeError(f"cannot subtract {other.shape} from {self.shape}")
        return Matrix._wrap(self._a - other._a, self.kernel)

    def __neg__(self):
        return Matrix._wrap(-self._a, self.kernel)

    def __matmul__(self, other):
        other = self._same(other, "multiply")
        if other is NotImplemented:
            return other
        if self.cols != other.rows:
            raise ShapeError(f"cannot multiply {self.shape} by {other.shape}")
        return Matrix._wrap(self._a @ other._a, self.kernel)

    def _scalar(self, c):
        return to_fraction(c) if self.kernel == RATIONAL else to_float(c)

    def __mul__(self, c):
        if isinstance(c, Matrix):
            raise TypeError("use @ for matrix products")
        return Matrix._wrap(self._a * self._scalar(c), self.kernel)

    __rmul__ = __mul__

    def __truediv__(self, c):
        return Matrix._wrap(self._a / self._scalar(c), self.kernel)

    @property
    def T(self):
        return Matrix._wrap(self._a.T.copy(), self.kernel)

    def __eq__(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        return (
            self.kernel == other.kernel
            and self.shape == other.shape
            and bool(np.all(self._a == other._a))
        )

    __hash__ = None

    # -- small helpers used across the package --------------------------

    def max_norm(self):
        """Largest absolute entry (a Fraction on the rational kernel)."""
        return max(abs(v) for v in self._a.ravel())

    def is_zero(self):
        return all(v == 0 for v in self._a.ravel())

    def row_sums(self):
        return list(self._a.sum(axis=1))

    def col_sums(self):
        return list(self._a.sum(axis=0))

    def delete(self, rows=(), cols=()):
        """Drop the given 0-based rows and columns."""
        a = np.delete(np.delete(self._a, list(rows), axis=0), list(cols), axis=1)
        return Matrix._wrap(a, self.kernel)

    def allclose(self, other, tol):
        """Max-norm closeness relative to ``max(1, |self|, |other|)``."""
        if self.shape != other.shape:
            return False
        diff = (self.to_float() - other.to_float()).max_norm()
        scale = max(1.0, float(self.max_norm()), float(other.max_norm()))
        return diff <= tol * scale


def _fmt(v):
    if isinstance(v, Fraction):
        return str(v)
    return repr(float(v))


# -- module-level operations ---------------------------------------------


def add(a: Matrix, b: Matrix) -> Matrix:
    return a + b


def mul(a: Matrix, b: Matrix) -> Matrix:
    return a @ b


def transpose(a: Matrix) -> Matrix:
    return a.T


@dataclass(frozen=True)
class RankProfile:
    """Rank, pivot columns and a full-rank factorization ``A = F @ G``.

    ``F`` is the submatrix of pivot columns of ``A`` and ``G`` the nonzero
    rows of the reduced row echelon form.  Both are ``None`` when the rank
    is zero.
    """

    rank: int
    pivots: tuple
    F: Matrix | None
    G: Matrix | None


def _rref_exact(a):
    rows = [list(r) for r in a.tolist()]
    m, n = len(rows), len(rows[0])
    pivots = []
    r = 0
    for c in range(n):
        if r == m:
            break
        p = next((i for i in range(r, m) if rows[i][c] != 0), None)
        if p is None:
            continue
        rows[r], rows[p] = rows[p], rows[r]
        piv = rows[r][c]
        rows[r] = [v / piv for v in rows[r]]
        pr = rows[r]
        for i in range(m):
            f = rows[i][c]
            if i != r and f != 0:
                rows[i] = [x - f * y for x, y in zip(rows[i], pr)]
        pivots.append(c)
        r += 1
    return rows, pivots


def _rref_float(a, rtol=RANK_RTOL):
    A = np.array(a, dtype=np.float64)
    m, n = A.shape
    thr = rtol * (np.abs(A).max() if A.size else 0.0)
    pivots = []
    r = 0
    for c in range(n):
        if r == m:
            break
        p = r + int(np.argmax(np.abs(A[r:, c])))
        if abs(A[p, c]) <= thr or A[p, c] == 0:
            A[r:, c] = 0.0
            continue
        if p != r:
            A[[r, p]] = A[[p, r]]
        A[r] /= A[r, c]
        others = np.arange(m) != r
        A[others] -= np.outer(A[others, c], A[r])
        A[others, c] = 0.0
        pivots.append(c)
        r += 1
    return A, pivots


def rank_profile(a: Matrix, rtol=RANK_RTOL) -> RankProfile:
    """Rank and full-rank factorization by Gauss-Jordan elimination.

    Exact on the rational kernel.  On the float kernel, partial pivoting
    is used and a pivot counts as zero when it is at most
    ``rtol * max|a_ij|``.
    """
    if a.kernel == RATIONAL:
        rows, pivots = _rref_exact(a.array)
        G = Matrix(rows[:len(pivots)], RATIONAL) if pivots else None
    else:
        R, pivots = _rref_float(a.array, rtol)
        G = Matrix._wrap(R[:len(pivots)].copy(), FLOAT) if pivots else None
    F = Matrix._wrap(np.array(a.array[:, pivots]), a.kernel) if pivots else None
    return RankProfile(len(pivots), tuple(pivots), F, G)


def rank(a: Matrix) -> int:
    return rank_profile(a).rank


def common_denominator(a: Matrix):
    """``(N, d)`` with integer ``N`` (object array) and ``a == N / d``; rational kernel."""
    d = 1
    for v in a.array.ravel():
        d = math.lcm(d, v.denominator)
    N = np.empty(a.shape, dtype=object)
    for idx, v in np.ndenumerate(a.array):
        N[idx] = v.numerator * (d // v.denominator)
    return N, d


def fraction_free_solve(M, B):
    """Solve ``M x = B`` for integer ``M`` (n x n) and ``B`` (n x k).

    Bareiss' fraction-free Gauss-Jordan elimination: every intermediate is
    an integer and every division is exact.  Returns ``(N, det)`` with
    ``x = N / det``; ``det`` is ``det(M)`` up to sign and never zero.
    Raises :class:`SingularMatrixError` if ``M`` is singular.
    """
    n = len(M)
    aug = [list(map(int, M[i])) + list(map(int, B[i])) for i in range(n)]
    width = len(aug[0])
    prev = 1
    for c in range(n):
        p = next((i for i in range(c, n) if aug[i][c] != 0), None)
        if p is None:
            raise SingularMatrixError("matrix is singular")
        if p != c:
            aug[c], aug[p] = aug[p], aug[c]
        pr = aug[c]
        piv = pr[c]
        for i in range(n):
            if i == c:
                continue
            ri = aug[i]
            f = ri[c]
            if f == 0:
                if piv != prev:
                    aug[i] = [x * piv // prev for x in ri]
                continue
            aug[i] = [(piv * x - f * y) // prev for x, y in zip(ri, pr)]
        prev = piv
    det = prev
    return [row[n:width] for row in aug], det


def _solve_exact(a, b):
    Na, da = common_denominator(a)
    Nb, db = common_denominator(b)
    # a x = b  <=>  (Na db) x = (Nb da)
    try:
        N, det = fraction_free_solve((Na * db).tolist(), (Nb * da).tolist())
    except SingularMatrixError:
        raise SingularMatrixError("matrix is singular", rank=rank(a)) from None
    return Matrix([[Fraction(v, det) for v in row] for row in N], RATIONAL)


def solve(a: Matrix, b: Matrix) -> Matrix:
    """Solve ``a @ x = b`` for square nonsingular ``a``."""
    if a.kernel != b.kernel:
        raise KernelMismatchError("solve needs matching kernels")
    if a.rows != a.cols:
        raise ShapeError(f"solve needs a square matrix, got {a.shape}")
    if b.rows != a.rows:
        raise ShapeError(f"right-hand side has {b.rows} rows, expected {a.rows}")
    if a.kernel == RATIONAL:
        return _solve_exact(a, b)
    r = rank(a)
    if r < a.rows:
        raise SingularMatrixError(f"matrix is singular (numerical rank {r} < {a.rows})", rank=r)
    return Matrix._wrap(np.linalg.solve(a.array, b.array), FLOAT)


def inverse(a: Matrix) -> Matrix:
    """Classical inverse; raises :class:`SingularMatrixError` when rank < n."""
    if a.rows != a.cols:
        raise ShapeError(f"only square matrices have inverses, got {a.shape}")
    return solve(a, Matrix.identity(a.rows, a.kernel))
