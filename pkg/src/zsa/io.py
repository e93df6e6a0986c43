"""Matrix documents in CSV and JSON.

CSV holds a plain matrix, one row per line.  JSON is an object::

    {"shape": [4, 4], "kernel": "rational",
     "entries": ["1", "0", "1", "-2", ...],
     "insert_rows": [3], "insert_cols": [2], "role": "zero-sum"}

``entries`` is row-major (a list of rows is accepted too).  Rational
entries are written as ``"p/q"`` strings and read back losslessly;
insertion positions are 1-based.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, replace
from fractions import Fraction

from .errors import ParseError, ShapeError
from .matrix import KERNELS, RATIONAL, Matrix, to_float, to_fraction

FORMATS = ("csv", "json")
ROLES = ("zero-sum", "compressed", "general")


@dataclass(frozen=True)
class MatrixDocument:
    matrix: Matrix
    insert_rows: tuple = ()
    insert_cols: tuple = ()
    role: str | None = None

    @property
    def kernel(self):
        return self.matrix.kernel

    @property
    def shape(self):
        return self.matrix.shape

    def with_matrix(self, matrix, **changes):
        return replace(self, matrix=matrix, **changes)


def _entry(text, kernel, line, column):
    try:
        if kernel == RATIONAL:
            return to_fraction(text)
        return to_float(text)
    except ZeroDivisionError:
        raise ParseError(f"zero denominator in {text!r}", line, column) from None
    except (ValueError, TypeError):
        raise ParseError(f"cannot parse entry {text!r}", line, column) from None


def _parse_csv(text, kernel):
    rows = []
    width = None
    for lineno, line in enumerate(text.splitlines(), start=1):
        if not line.strip() or line.lstrip().startswith("#"):
            continue
        fields = line.split(",")
        if width is None:
            width = len(fields)
        elif len(fields) != width:
            raise ParseError(
                f"row {len(rows) + 1} has {len(fields)} entries, expected {width}", lineno
            )
        rows.append([_entry(f, kernel, lineno, col) for col, f in enumerate(fields, start=1)])
    if not rows:
        raise ParseError("empty CSV document")
    return MatrixDocument(Matrix(rows, kernel))


def _positions(obj, key):
    vals = obj.get(key) or []
    if not isinstance(vals, list) or not all(isinstance(v, int) and not isinstance(v, bool) for v in vals):
        raise ParseError(f"{key!r} must be a list of 1-based integers")
    return tuple(vals)


def _parse_json(text, kernel):
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc.msg}", exc.lineno, exc.colno) from None
    if not isinstance(obj, dict):
        raise ParseError("JSON document must be an object")
    declared = obj.get("kernel")
    if declared is not None and declared not in KERNELS:
        raise ParseError(f"unknown kernel {declared!r}")
    kernel = kernel or declared or RATIONAL
    entries = obj.get("entries")
    if not isinstance(entries, list) or not entries:
        raise ParseError("'entries' must be a non-empty list")
    nested = all(isinstance(e, list) for e in entries)
    flat = [v for row in entries for v in row] if nested else entries
    shape = obj.get("shape")
    if shape is None:
        if not nested:
            raise ParseError("'shape' is required for a flat entry list")
        shape = [len(entries), len(entries[0])]
    if (not isinstance(shape, list) or len(shape) != 2
            or not all(isinstance(s, int) and s > 0 for s in shape)):
        raise ParseError("'shape' must be [rows, cols] with positive integers")
    rows, cols = shape
    if len(flat) != rows * cols:
        raise ParseError(f"shape {rows}x{cols} needs {rows * cols} entries, got {len(flat)}")
    values = []
    for k, v in enumerate(flat):
        if isinstance(v, bool) or not isinstance(v, (str, int, float)):
            raise ParseError(f"entry {k + 1} has unsupported type {type(v).__name__}")
        # a JSON number means its decimal spelling, not the nearest binary64
        values.append(_entry(repr(v) if isinstance(v, float) else v, kernel, None, None))
    role = obj.get("role")
    if role is not None and role not in ROLES:
        raise ParseError(f"unknown role {role!r}")
    try:
        matrix = Matrix.from_flat(rows, cols, values, kernel)
    except ShapeError as exc:
        raise ParseError(str(exc)) from None
    return MatrixDocument(matrix, _positions(obj, "insert_rows"), _positions(obj, "insert_cols"), role)


def parse_matrix(text: str, fmt: str = "csv", kernel: str | None = None) -> MatrixDocument:
    """Parse a CSV or JSON matrix document.

    ``kernel`` overrides the document's own tag; CSV defaults to rational.
    """
    if fmt == "csv":
        return _parse_csv(text, kernel or RATIONAL)
    if fmt == "json":
        return _parse_json(text, kernel)
    raise ValueError(f"unknown format {fmt!r}")


def format_entry(value):
    if isinstance(value, Fraction):
        return str(value)
    return repr(float(value))


def dump_matrix(doc: MatrixDocument | Matrix, fmt: str = "csv") -> str:
    if isinstance(doc, Matrix):
        doc = MatrixDocument(doc)
    M = doc.matrix
    if fmt == "csv":
        return "\n".join(",".join(format_entry(v) for v in row) for row in M.array) + "\n"
    if fmt == "json":
        obj = {
            "shape": list(M.shape),
            "kernel": M.kernel,
            "entries": [format_entry(v) for v in M.flat()],
            "insert_rows": list(doc.insert_rows),
            "insert_cols": list(doc.insert_cols),
        }
        if doc.role is not None:
            obj["role"] = doc.role
        return json.dumps(obj) + "\n"
    raise ValueError(f"unknown format {fmt!r}")


def guess_format(path):
    return "json" if str(path).lower().endswith(".json") else "csv"


