"""The zero-sum matrices as a ring, and their compressed representatives.

A zero-sum matrix ``Xt`` (every row and column sums to zero, optionally
with identically zero rows ``b`` and columns ``a``) is determined by the
submatrix ``X`` left after deleting the zero rows/columns and the last
remaining row and column.  :func:`lift` and :func:`compress` move between
the two, and ``lift(X) @ lift(Y) == lift(twisted_product(X, Y))``.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import MembershipError, ShapeError
from .matrix import FLOAT, RATIONAL, Matrix, inverse
from .structural import StructuralOperator, make_gram

# relative tolerance on row/column sums for float-kernel membership
FLOAT_MEMBERSHIP_RTOL = 1e-12


@dataclass(frozen=True)
class ZeroSumMatrix:
    """A validated zero-sum matrix with its operators and representative.

    ``widened == row_op.matrix().T @ compressed @ col_op.matrix()``.
    """

    widened: Matrix
    row_op: StructuralOperator
    col_op: StructuralOperator
    compressed: Matrix

    @property
    def kernel(self):
        return self.widened.kernel

    @property
    def shape(self):
        return self.widened.shape

    @property
    def insert_rows(self):
        return self.row_op.insertions

    @property
    def insert_cols(self):
        return self.col_op.insertions

    @property
    def has_insertions(self):
        return bool(self.row_op.insertions or self.col_op.insertions)

    def astype(self, kernel):
        if kernel == self.kernel:
            return self
        return ZeroSumMatrix(
            self.widened.astype(kernel), self.row_op, self.col_op, self.compressed.astype(kernel)
        )

    def to_float(self):
        return self.astype(FLOAT)


def lift(X: Matrix, row_op: StructuralOperator | None = None,
         col_op: StructuralOperator | None = None) -> ZeroSumMatrix:
    """Embed ``X`` as ``row_op^T @ X @ col_op``.

    Without operators this is the plain ``J_m^T X J_n`` for an ``m x n`` X.
    """
    row_op = row_op or StructuralOperator(X.rows)
    col_op = col_op or StructuralOperator(X.cols)
    if row_op.m != X.rows or col_op.m != X.cols:
        raise ShapeError(
            f"X is {X.shape} but the operators have base dimensions {row_op.m} and {col_op.m}"
        )
    widened = row_op.matrix(X.kernel).T @ X @ col_op.matrix(X.kernel)
    return ZeroSumMatrix(widened, row_op, col_op, X)


def _is_zero(value, tol):
    return value == 0 if tol is None else abs(value) <= tol


def _listing(positions, sums):
    return ", ".join(f"{p} ({sums[p - 1]})" for p in positions)


def validate_membership(A: Matrix, insert_cols=(), insert_rows=(), tol=None) -> ZeroSumMatrix:
    """Check that ``A`` is a zero-sum matrix with zero rows/columns as declared.

    ``insert_cols`` (``a``) and ``insert_rows`` (``b``) are 1-based.  Exact
    on the rational kernel; on floats a sum counts as zero when it is at
    most ``tol`` (default ``1e-12 * max|A_ij|``).
    """
    insert_cols = tuple(sorted(int(p) for p in insert_cols))
    insert_rows = tuple(sorted(int(p) for p in insert_rows))
    m = A.rows - 1 - len(insert_rows)
    n = A.cols - 1 - len(insert_cols)
    if m < 1 or n < 1:
        raise ShapeError(
            f"a {A.rows}x{A.cols} matrix with {len(insert_rows)} zero rows and "
            f"{len(insert_cols)} zero columns has no compressed representative"
        )
    row_op = StructuralOperator(m, insert_rows)
    col_op = StructuralOperator(n, insert_cols)

    if A.kernel == FLOAT and tol is None:
        tol = FLOAT_MEMBERSHIP_RTOL * float(A.max_norm())
    elif A.kernel == RATIONAL:
        tol = None

    row_sums, col_sums = A.row_sums(), A.col_sums()
    bad_rows = [i + 1 for i, s in enumerate(row_sums) if not _is_zero(s, tol)]
    bad_cols = [j + 1 for j, s in enumerate(col_sums) if not _is_zero(s, tol)]
    problems = []
    if bad_rows:
        problems.append("nonzero row sums at rows " + _listing(bad_rows, row_sums))
    if bad_cols:
        problems.append("nonzero column sums at columns " + _listing(bad_cols, col_sums))
    nz_rows = [p for p in insert_rows if not all(_is_zero(v, tol) for v in A.array[p - 1])]
    nz_cols = [p for p in insert_cols if not all(_is_zero(v, tol) for v in A.array[:, p - 1])]
    if nz_rows:
        problems.append("declared zero rows are nonzero: " + ", ".join(map(str, nz_rows)))
    if nz_cols:
        problems.append("declared zero columns are nonzero: " + ", ".join(map(str, nz_cols)))
    if problems:
        raise MembershipError(
            "not a zero-sum member: " + "; ".join(problems),
            row_sums=row_sums, col_sums=col_sums,
            bad_rows=sorted(set(bad_rows + nz_rows)), bad_cols=sorted(set(bad_cols + nz_cols)),
        )

    drop_rows = [p - 1 for p in insert_rows] + [row_op.dependent]
    drop_cols = [p - 1 for p in insert_cols] + [col_op.dependent]
    X = A.delete(drop_rows, drop_cols)
    return ZeroSumMatrix(A, row_op, col_op, X)


def compress(Xt, insert_cols=(), insert_rows=()) -> Matrix:
    """Compressed representative of a zero-sum matrix.

    Accepts a :class:`ZeroSumMatrix` or a plain matrix, which is validated
    first.
    """
    if isinstance(Xt, ZeroSumMatrix):
        return Xt.compressed
    return validate_membership(Xt, insert_cols, insert_rows).compressed


def twisted_product(X: Matrix, Y: Matrix, m: int | None = None) -> Matrix:
    """``X o Y = X @ K_m @ Y``, the product that makes :func:`lift` a ring map."""
    m = X.cols if m is None else m
    if X.cols != m or Y.rows != m:
        raise ShapeError(f"twisted product over m={m} needs X with {m} columns and Y with {m} rows")
    return X @ make_gram(m, X.kernel).K @ Y


def twisted_identity(m: int, kernel=RATIONAL) -> Matrix:
    """``K_m^{-1}``, the identity element under the twisted product."""
    return make_gram(m, kernel).K_inv


def twisted_inverse(X: Matrix) -> Matrix:
    """Inverse under the twisted product, ``K^{-1} X^{-1} K^{-1}``."""
    if X.rows != X.cols:
        raise ShapeError(f"twisted inverse needs a square matrix, got {X.shape}")
    K_inv = make_gram(X.rows, X.kernel).K_inv
    return K_inv @ inverse(X) @ K_inv


def is_symmetric_pair(X: Matrix) -> bool:
    """True iff ``X`` is symmetric, which holds iff ``lift(X)`` is."""
    return X.rows == X.cols and X == X.T
