"""Zero-sum matrices as a ring.

Every matrix whose rows and columns all sum to zero is the lift of a
smaller unconstrained matrix.  Products line up once the small side uses
the twisted product X K Y.
"""

from zsa import Matrix, compress, lift, make_gram, ring_identity, twisted_product, validate_membership

## Lifting a 2x2 matrix
X = Matrix([[1, 1], [3, -1]])
Xt = lift(X).widened
print(Xt)
print("row sums", [str(s) for s in Xt.row_sums()], "column sums", [str(s) for s in Xt.col_sums()])

## Going back
print(compress(Xt) == X)

## Products: ordinary on the big side, twisted on the small side
Y = Matrix([["1/2", 0], [2, -3]])
left = lift(twisted_product(X, Y)).widened
right = Xt @ lift(Y).widened
print(left == right)

## The identity of the ring is not the identity matrix
E = ring_identity(3)
print(E)
print(E @ Xt == Xt, Xt @ E == Xt)
print(E == lift(make_gram(2).K_inv).widened)  # it is the lift of K^-1

try:
    validate_membership(Matrix.identity(3))
except ValueError as exc:
    print("I_3:", exc)
