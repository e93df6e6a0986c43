"""Exception hierarchy shared by the whole package."""


class ZsaError(Exception):
    """Base class for every error raised by :mod:`zsa`."""


class ShapeError(ZsaError, ValueError):
    pass


class KernelMismatchError(ZsaError, TypeError):
    pass


class SingularMatrixError(ZsaError, ArithmeticError):
    def __init__(self, message, rank=None):
        super().__init__(message)
        self.rank = rank


class MembershipError(ZsaError, ValueError):
    """A matrix is not a zero-sum member.

    ``row_sums`` / ``col_sums`` hold every sum, ``bad_rows`` / ``bad_cols``
    the 1-based indices that violate a constraint.
    """

    def __init__(self, message, row_sums=(), col_sums=(), bad_rows=(), bad_cols=()):
        super().__init__(message)
        self.row_sums = tuple(row_sums)
        self.col_sums = tuple(col_sums)
        self.bad_rows = tuple(bad_rows)
        self.bad_cols = tuple(bad_cols)


class PreconditionError(ZsaError, ValueError):
    """Input is valid but does not meet a method's precondition."""


class RankDeficientError(PreconditionError):
    def __init__(self, message, rank=None, required=None):
        super().__init__(message)
        self.rank = rank
        self.required = required


class NonConvergenceError(ZsaError, ArithmeticError):
    def __init__(self, message, residuals=()):
        super().__init__(message)
        self.residuals = tuple(residuals)


class IdentityViolation(ZsaError, ArithmeticError):
    """Two routes to a quantity that must coincide did not."""


class ParseError(ZsaError, ValueError):
    def __init__(self, message, line=None, column=None):
        where = ""
        if line is not None:
            where = f" (line {line}" + (f", column {column}" if column is not None else "") + ")"
        super().__init__(message + where)
        self.line = line
        self.column = column
