"""Zero row/column-sum matrices and their Moore-Penrose inverses."""

from .errors import (
    IdentityViolation,
    KernelMismatchError,
    MembershipError,
    NonConvergenceError,
    ParseError,
    PreconditionError,
    RankDeficientError,
    ShapeError,
    SingularMatrixError,
    ZsaError,
)
from .matrix import FLOAT, RATIONAL, Matrix, RankProfile, add, inverse, mul, rank, rank_profile, solve, transpose
from .oracle import PenroseReport, is_pseudoinverse, iterative_pinv, oracle_pinv, penrose_check
from .pinv import (
    LimitSchedule,
    LimitTrace,
    PinvResult,
    naive_pinv_counterexample,
    pinv_cholesky,
    pinv_cols_only,
    pinv_full_rank,
    pinv_limit,
    pinv_nonsquare,
    pinv_rows_only,
    pinv_zero_inserted,
    projector,
    projector_fixes,
    projector_range_basis,
    twisted_penrose_check,
    twisted_pinv,
)
from .ring import (
    ZeroSumMatrix,
    compress,
    is_symmetric_pair,
    lift,
    twisted_identity,
    twisted_inverse,
    twisted_product,
    validate_membership,
)
from .structural import GramPair, StructuralOperator, make_gram, make_J, make_J_inserted, ring_identity

__version__ = "0.1.0"
