"""``zsa`` command line.

Exit status: 0 success, 1 mathematical failure (non-member, failed
Penrose condition, failed verification), 2 bad input or unmet method
precondition.
"""

from __future__ import annotations

import argparse
import sys

from . import io
from .errors import (
    MembershipError,
    NonConvergenceError,
    ParseError,
    PreconditionError,
    ShapeError,
    SingularMatrixError,
)
from .matrix import KERNELS, RATIONAL, rank
from .pinv import (
    CHOLESKY, COLS_ONLY, FULL_RANK, LIMIT, NONSQUARE, ROWS_ONLY, ZERO_INSERTED,
    LimitSchedule,
    pinv_cholesky,
    pinv_cols_only,
    pinv_full_rank,
    pinv_limit,
    pinv_nonsquare,
    pinv_rows_only,
    pinv_zero_inserted,
    split_cols_only,
    split_rows_only,
)
from .ring import lift, validate_membership
from .structural import StructuralOperator
from .verify import run_case, run_verification

EXIT_OK, EXIT_FAIL, EXIT_INPUT = 0, 1, 2
METHOD_CHOICES = ("auto", "full-rank", CHOLESKY, LIMIT, NONSQUARE, ZERO_INSERTED, ROWS_ONLY, COLS_ONLY)


def _positions(text):
    if not text:
        return ()
    try:
        return tuple(int(t) for t in text.split(",") if t.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated 1-based positions, got {text!r}")


def _read(args):
    fmt = args.format or (io.guess_format(args.input) if args.input != "-" else "csv")
    if args.input == "-":
        text = sys.stdin.read()
    else:
        with open(args.input, encoding="utf-8") as fh:
            text = fh.read()
    doc = io.parse_matrix(text, fmt, args.kernel)
    rows = args.insert_rows if args.insert_rows is not None else doc.insert_rows
    cols = args.insert_cols if args.insert_cols is not None else doc.insert_cols
    out_fmt = args.output_format or fmt
    return doc.with_matrix(doc.matrix, insert_rows=tuple(rows), insert_cols=tuple(cols)), out_fmt


def _write(doc, fmt, out):
    out.write(io.dump_matrix(doc, fmt))


def _fmt_sums(values):
    return "[" + ", ".join(io.format_entry(v) for v in values) + "]"


def cmd_check(args, out=None):
    out = out or sys.stdout
    doc, _ = _read(args)
    A = doc.matrix
    print(f"row sums:    {_fmt_sums(A.row_sums())}", file=out)
    print(f"column sums: {_fmt_sums(A.col_sums())}", file=out)
    try:
        zs = validate_membership(A, doc.insert_cols, doc.insert_rows)
    except MembershipError as exc:
        print(f"non-member: {exc}", file=out)
        return EXIT_FAIL
    except ShapeError as exc:
        print(f"non-member: {exc}", file=out)
        return EXIT_FAIL
    print(f"member: compressed representative is {zs.compressed.rows}x{zs.compressed.cols}, "
          f"rank {rank(zs.compressed)}", file=out)
    return EXIT_OK


def _auto_method(zs):
    X = zs.compressed
    if zs.has_insertions:
        return ZERO_INSERTED
    if X.rows == X.cols and X.kernel == RATIONAL and rank(X) == X.rows:
        return FULL_RANK
    return CHOLESKY if X.rows == X.cols else NONSQUARE


def _compute(doc, method, schedule, tol):
    A = doc.matrix
    if method == ROWS_ONLY:
        return pinv_rows_only(split_rows_only(A))
    if method == COLS_ONLY:
        return pinv_cols_only(split_cols_only(A))
    zs = validate_membership(A, doc.insert_cols, doc.insert_rows)
    if method == "auto":
        method = _auto_method(zs)
    if method in ("full-rank", FULL_RANK):
        return pinv_full_rank(zs)
    if method == ZERO_INSERTED:
        return pinv_zero_inserted(zs)
    if method == CHOLESKY:
        return pinv_cholesky(zs, tol)
    if method == NONSQUARE:
        return pinv_nonsquare(zs, tol)
    if method == LIMIT:
        return pinv_limit(zs, schedule, tol)
    raise PreconditionError(f"unknown method {method!r}")


def cmd_pinv(args, out=None, err=None):
    out, err = out or sys.stdout, err or sys.stderr
    doc, fmt = _read(args)
    schedule = LimitSchedule.parse(args.delta_schedule) if args.delta_schedule else None
    try:
        result = _compute(doc, args.method, schedule, args.tol)
    except MembershipError as exc:
        print(f"error: {exc}", file=err)
        return EXIT_FAIL
    except NonConvergenceError as exc:
        print(f"error: {exc}", file=err)
        print("differences: " + ", ".join(f"{r:.3e}" for r in exc.residuals), file=err)
        return EXIT_FAIL
    except (PreconditionError, SingularMatrixError) as exc:
        print(f"error: method {args.method!r} not applicable: {exc}", file=err)
        return EXIT_INPUT
    ok = result.ok
    print(f"method: {result.method}", file=err)
    for line in result.report.lines():
        print(line, file=err)
    if args.cross_check and result.method in (CHOLESKY, FULL_RANK, NONSQUARE, ZERO_INSERTED):
        ok = _cross_check(doc, result, args, err) and ok
    role = "general" if result.method in (ROWS_ONLY, COLS_ONLY) else "zero-sum"
    # the inverse of J_b^T X J_a has zero rows at a and zero columns at b
    _write(io.MatrixDocument(result.pinv, doc.insert_cols, doc.insert_rows, role), fmt, out)
    return EXIT_OK if ok else EXIT_FAIL


def _cross_check(doc, result, args, err):
    zs = validate_membership(doc.matrix, doc.insert_cols, doc.insert_rows)
    schedule = LimitSchedule.parse(args.delta_schedule) if args.delta_schedule else None
    try:
        other = pinv_limit(zs, schedule, args.tol)
    except NonConvergenceError as exc:
        print(f"cross-check: limit formula did not converge: {exc}", file=err)
        return False
    ok = result.pinv.to_float().allclose(other.pinv, args.tol or 1e-9)
    gap = float((result.pinv.to_float() - other.pinv).max_norm())
    print(f"cross-check against limit formula: max gap {gap:.3e} {'pass' if ok else 'FAIL'}", file=err)
    return ok


def cmd_lift(args, out=None):
    out = out or sys.stdout
    doc, fmt = _read(args)
    X = doc.matrix
    zs = lift(X, StructuralOperator(X.rows, doc.insert_rows), StructuralOperator(X.cols, doc.insert_cols))
    _write(io.MatrixDocument(zs.widened, doc.insert_rows, doc.insert_cols, "zero-sum"), fmt, out)
    return EXIT_OK


def cmd_compress(args, out=None, err=None):
    out, err = out or sys.stdout, err or sys.stderr
    doc, fmt = _read(args)
    try:
        zs = validate_membership(doc.matrix, doc.insert_cols, doc.insert_rows)
    except (MembershipError, ShapeError) as exc:
        print(f"error: {exc}", file=err)
        return EXIT_FAIL
    _write(io.MatrixDocument(zs.compressed, doc.insert_rows, doc.insert_cols, "compressed"), fmt, out)
    return EXIT_OK


def cmd_verify(args, out=None):
    out = out or sys.stdout
    kernel = args.kernel or RATIONAL
    if args.case is not None:
        res = run_case(args.seed, args.case, args.max_size, kernel, args.tol)
        for name, r in sorted(res.residuals.items()):
            print(f"{name:<28} {r:.3e} {'FAIL' if name in res.failures else 'pass'}", file=out)
        if res.error:
            print(f"error: {res.error}", file=out)
        return EXIT_OK if res.ok else EXIT_FAIL
    summary = run_verification(args.cases, args.seed, args.max_size, kernel, args.tol, args.workers)
    for line in summary.lines():
        print(line, file=out)
    return EXIT_OK if summary.ok else EXIT_FAIL


def _positive(text):
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError("must be positive")
    return v


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=io.FORMATS, help="input format (default: from extension, else csv)")
    common.add_argument("--output-format", choices=io.FORMATS, help="output format (default: same as input)")
    common.add_argument("--kernel", choices=KERNELS, help="scalar kernel (default: document's, else rational)")
    common.add_argument("--tol", type=float, default=None, help="float tolerance (default: $ZSA_TOL or 1e-9)")

    ins = argparse.ArgumentParser(add_help=False)
    ins.add_argument("input", nargs="?", default="-", help="matrix file, or - for stdin")
    ins.add_argument("--insert-rows", type=_positions, default=None, help="1-based zero rows, e.g. 3 or 2,5")
    ins.add_argument("--insert-cols", type=_positions, default=None, help="1-based zero columns")

    parser = argparse.ArgumentParser(prog="zsa", description="Zero row/column-sum matrices and their pseudoinverses.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", parents=[common, ins], help="test zero-sum membership")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("pinv", parents=[common, ins], help="Moore-Penrose inverse by a closed formula")
    p.add_argument("--method", choices=METHOD_CHOICES, default="auto")
    p.add_argument("--delta-schedule", help="comma-separated decreasing deltas for the limit method")
    p.add_argument("--cross-check", action="store_true", help="also run the limit formula and compare")
    p.set_defaults(func=cmd_pinv)

    p = sub.add_parser("lift", parents=[common, ins], help="embed a representative as a zero-sum matrix")
    p.set_defaults(func=cmd_lift)

    p = sub.add_parser("compress", parents=[common, ins], help="extract the representative of a zero-sum matrix")
    p.set_defaults(func=cmd_compress)

    p = sub.add_parser("verify", parents=[common], help="randomized verification of all identities")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--cases", type=_positive, default=100)
    p.add_argument("--max-size", type=_positive, default=5, help="largest representative size n")
    p.add_argument("--workers", type=_positive, default=1)
    p.add_argument("--case", type=int, default=None, help="replay a single case index")
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    try:
        return args.func(args)
    except (ParseError, ShapeError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
