"""Randomized verification of every identity the package implements.

Case ``i`` of a run with seed ``s`` draws from ``default_rng([s, i])``, so
any case can be replayed on its own with :func:`run_case`.
"""

from __future__ import annotations

import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .matrix import FLOAT, RATIONAL
from .oracle import default_tol, one_inverse, oracle_pinv, penrose_check
from .pinv import (
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
)
from .ring import lift, twisted_product, validate_membership
from .sampling import WELL_CONDITIONED, random_full_rank, random_matrix, random_member, random_rank
from .structural import make_gram, ring_identity


@dataclass
class CaseResult:
    index: int
    size: int
    residuals: dict = field(default_factory=dict)
    failures: list = field(default_factory=list)
    error: str | None = None

    @property
    def ok(self):
        return not self.failures and self.error is None


@dataclass
class VerificationSummary:
    kernel: str
    seed: int
    tol: float
    cases: list
    wall_time: float

    @property
    def total(self):
        return len(self.cases)

    @property
    def passed(self):
        return sum(c.ok for c in self.cases)

    @property
    def failed(self):
        return self.total - self.passed

    @property
    def max_residual(self):
        vals = [r for c in self.cases for r in c.residuals.values()]
        return max(vals, default=0.0)

    @property
    def ok(self):
        return self.failed == 0

    def lines(self):
        out = [
            f"kernel={self.kernel} seed={self.seed} cases={self.total} "
            f"passed={self.passed} failed={self.failed} "
            f"max_residual={self.max_residual:.3e} wall_time={self.wall_time:.2f}s"
        ]
        for c in self.cases:
            if not c.ok:
                what = c.error or ", ".join(c.failures)
                out.append(f"  FAIL case {c.index} (replay: --seed {self.seed} --case {c.index}): {what}")
        return out


class _Checker:
    def __init__(self, result, tol):
        self.result = result
        self.tol = tol

    def equal(self, name, a, b):
        # exact comparison on rationals, relative max-norm on floats
        if a.shape != b.shape:
            self.result.failures.append(f"{name} (shape)")
            return
        diff = float((a.to_float() - b.to_float()).max_norm())
        if a.kernel == RATIONAL and b.kernel == RATIONAL:
            ok = a == b
        else:
            diff /= max(1.0, float(b.to_float().max_norm()))
            ok = diff <= self.tol
        self._record(name, diff, ok)

    def report(self, name, rep):
        self._record(name, rep.max_residual, rep.ok)

    def truth(self, name, flag):
        self._record(name, 0.0 if flag else 1.0, bool(flag))

    def _record(self, name, residual, ok):
        self.result.residuals[name] = max(residual, self.result.residuals.get(name, 0.0))
        if not ok:
            self.result.failures.append(name)


def _rational_checks(rng, n, ck):
    X, Y = random_matrix(rng, n, n), random_matrix(rng, n, n)
    lx, ly = lift(X), lift(Y)
    ck.equal("isomorphism/add", lift(X + Y).widened, lx.widened + ly.widened)
    ck.equal("isomorphism/product", lift(twisted_product(X, Y)).widened, lx.widened @ ly.widened)
    ck.equal("round-trip", validate_membership(lx.widened).compressed, X)
    prod = lx.widened @ ly.widened
    ck.truth("closure", all(s == 0 for s in prod.row_sums() + prod.col_sums()))
    E = ring_identity(n + 1)
    ck.equal("identity/left", E @ lx.widened, lx.widened)
    ck.equal("identity/right", lx.widened @ E, lx.widened)

    r = int(rng.integers(0, n + 1))
    p, q = int(rng.integers(1, n + 2)), int(rng.integers(1, n + 2))
    A = random_rank(rng, p, q, min(r, p, q))
    P = oracle_pinv(A)
    ck.report("oracle/penrose", penrose_check(A, P))
    ck.equal("oracle/transpose", oracle_pinv(A.T), P.T)

    zs = lift(random_full_rank(rng, n))
    res = pinv_full_rank(zs)
    ck.report("full-rank/penrose", res.report)
    ck.equal("full-rank/oracle", res.pinv, oracle_pinv(zs.widened))
    ck.equal("full-rank/true-inverse", zs.widened @ res.pinv, E)
    ck.report("naive/full-rank", naive_pinv_counterexample(zs))

    zi = random_member(rng, n, insert_rows=int(rng.integers(0, 3)), insert_cols=int(rng.integers(0, 3)))
    res = pinv_zero_inserted(zi)
    ck.report("zero-inserted/penrose", res.report)
    ck.equal("zero-inserted/oracle", res.pinv, oracle_pinv(zi.widened))
    ck.equal("projector/direct", res.pinv @ zi.widened, projector(zi))
    M = random_matrix(rng, n, int(rng.integers(1, 4)))
    ck.truth("projector/fixes", projector_fixes(M, zi.insert_cols, zi))

    rows = n + int(rng.integers(0, 3))
    L = random_rank(rng, rows, n, n)
    res = pinv_rows_only(L)
    ck.report("rows-only/penrose", res.report)
    ck.equal("rows-only/oracle", res.pinv, oracle_pinv(L @ lift(L).col_op.matrix()))
    R = L.T
    res = pinv_cols_only(R)
    ck.report("cols-only/penrose", res.report)

    # a pseudoinverse under the twisted product lifts to a pseudoinverse
    Xr = random_rank(rng, n, n, int(rng.integers(0, n + 1)))
    K_inv = make_gram(n).K_inv
    G = K_inv @ one_inverse(Xr, random_matrix(rng, n, n)) @ K_inv
    lifted = lift(Xr).widened
    ck.equal("twisted-pseudoinverse", lifted @ lift(G).widened @ lifted, lifted)


def _float_checks(rng, n, ck):
    r = int(rng.integers(0, n + 1))
    zs = random_member(rng, n, r, min_sv=WELL_CONDITIONED)
    truth = oracle_pinv(zs.widened)
    fz = zs.to_float()
    res = pinv_cholesky(fz, ck.tol)
    ck.report("cholesky/penrose", res.report)
    ck.equal("cholesky/oracle", res.pinv, truth)
    res = pinv_limit(fz, tol=ck.tol)
    ck.report("limit/penrose", res.report)
    ck.equal("limit/oracle", res.pinv, truth)

    cols = int(rng.integers(1, 7))
    zn = random_member(rng, n, int(rng.integers(0, min(n, cols) + 1)), cols=cols,
                       min_sv=WELL_CONDITIONED)
    res = pinv_nonsquare(zn.to_float(), ck.tol)
    ck.report("nonsquare/penrose", res.report)
    ck.equal("nonsquare/oracle", res.pinv, oracle_pinv(zn.widened))

    X = random_matrix(rng, n, n, FLOAT)
    ck.equal("float-isomorphism/product",
             lift(twisted_product(X, X)).widened, lift(X).widened @ lift(X).widened)


def run_case(seed, index, max_size=5, kernel=RATIONAL, tol=None) -> CaseResult:
    if max_size < 1:
        raise ValueError("max_size must be positive")
    rng = np.random.default_rng([seed, index])
    n = int(rng.integers(1, max_size + 1))
    result = CaseResult(index, n)
    ck = _Checker(result, default_tol(kernel) if tol is None else tol)
    try:
        (_rational_checks if kernel == RATIONAL else _float_checks)(rng, n, ck)
    except Exception as exc:  # reported per case, never aborts the run
        result.error = f"{type(exc).__name__}: {exc}"
    return result


def _run_one(args):
    return run_case(*args)


def run_verification(cases=100, seed=0, max_size=5, kernel=RATIONAL, tol=None,
                     workers=1) -> VerificationSummary:
    if cases < 1:
        raise ValueError("cases must be positive")
    tol = default_tol(kernel) if tol is None else tol
    start = time.perf_counter()
    jobs = [(seed, i, max_size, kernel, tol) for i in range(cases)]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_run_one, jobs))
    else:
        results = [_run_one(j) for j in jobs]
    return VerificationSummary(kernel, seed, tol, results, time.perf_counter() - start)

