"""Zero-sum matrices that also carry whole zero rows and columns.

Here the 4x4 member has a zero third row and a zero second column.  Its
corner entry is 4; a commonly reproduced copy of this example shows 3
there, which breaks the fourth row and column sums.
"""

from zsa import Matrix, StructuralOperator, lift, pinv_zero_inserted, projector, projector_range_basis, rank
from zsa.cli import main

X = Matrix([[1, 1], [3, -1]])
rows, cols = StructuralOperator(2, (3,)), StructuralOperator(2, (2,))
print(rows.matrix())
print(cols.matrix())

## The member and its inverse
zs = lift(X, rows, cols)
print(zs.widened)
res = pinv_zero_inserted(zs)
print(res.pinv)  # zero second row, zero third column
print(res.report)

## The projector Xt^+ Xt and what it fixes
P = projector(zs)
print(P)
B = projector_range_basis((2,), 2)
print(P @ B == B, rank(P))

## The corner-3 copy is not a zero-sum matrix
import os
import tempfile

with tempfile.NamedTemporaryFile("w", suffix=".csv", delete=False) as fh:
    fh.write("1,0,1,-2\n3,0,-1,-2\n0,0,0,0\n-4,0,0,3\n")
print("exit status", main(["check", fh.name, "--insert-rows", "3", "--insert-cols", "2"]))
os.unlink(fh.name)
