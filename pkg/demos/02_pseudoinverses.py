"""Moore-Penrose inverses of zero-sum matrices, by formula.

Full rank works in exact rationals.  Rank-deficient members need the
Cholesky factor of K, so that path runs in floats; the regularized limit
gives an independent check.
"""

from zsa import (
    LimitSchedule,
    Matrix,
    lift,
    naive_pinv_counterexample,
    oracle_pinv,
    pinv_cholesky,
    pinv_full_rank,
    pinv_limit,
    validate_membership,
)

## Full rank: exact, and a true inverse inside the ring
zs = lift(Matrix([[1, 1], [3, -1]]))
res = pinv_full_rank(zs)
print(res.pinv)
print(res.report)
print(zs.widened @ res.pinv)

## Rank one: Cholesky path
A = validate_membership(Matrix([[1, 2, 0, -3], [0, 0, 0, 0], [0, 0, 0, 0], [-1, -2, 0, 3]]))
chol = pinv_cholesky(A.to_float())
print(chol.pinv)
print("max gap to the exact oracle",
      float((chol.pinv - oracle_pinv(A.widened).to_float()).max_norm()))

## The obvious guess K^-1 X^+ K^-1 is a generalized inverse but not the MP one
print(naive_pinv_counterexample(A))

## Regularized limit along delta = 1e-3 ... 1e-8
lim = pinv_limit(A.to_float())
for d, gap in zip(lim.trace.deltas[1:], lim.trace.differences):
    print(f"delta {d:.0e}  step {gap:.2e}")
print("extrapolation error estimate", lim.trace.error_estimate)

## Nearly singular input needs smaller deltas
ill = lift(Matrix([[1.0, 1.0], [1.0, 1.001]], "float"))
try:
    pinv_limit(ill)
except ArithmeticError as exc:
    print("default schedule:", exc)
print(pinv_limit(ill, LimitSchedule.geometric("1e-9", 10, 6)).report)
