from pathlib import Path

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from zsa import (
    FLOAT,
    LimitSchedule,
    Matrix,
    NonConvergenceError,
    PreconditionError,
    RankDeficientError,
    StructuralOperator,
    inverse,
    lift,
    make_gram,
    naive_pinv_counterexample,
    oracle_pinv,
    penrose_check,
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
    rank,
    ring_identity,
    twisted_penrose_check,
    twisted_pinv,
    validate_membership,
)
from zsa.io import parse_matrix
from zsa.oracle import one_inverse
from zsa.pinv import split_cols_only, split_rows_only
from zsa.sampling import WELL_CONDITIONED, random_full_rank, random_matrix, random_member, random_rank

from conftest import Q

FIXTURES = Path(__file__).parent / "fixtures"
X0 = Q([[1, 1], [3, -1]])
ROW3, COL2 = StructuralOperator(2, (3,)), StructuralOperator(2, (2,))


def rel_err(a, b):
    a, b = a.to_numpy(), b.to_numpy()
    return np.abs(a - b).max() / max(1.0, np.abs(b).max())


def zero_sums(A, tol=0):
    return all(abs(s) <= tol for s in A.row_sums() + A.col_sums())


def S(rows):
    return validate_membership(Q(rows))


class TestFullRank:
    def test_smallest(self):
        res = pinv_full_rank(S([[1, -1], [-1, 1]]))
        assert res.pinv == Q([[1, -1], [-1, 1]]) / 4
        assert res.method == "full-rank-square"

    def test_ring_identity_is_own_inverse(self):
        assert pinv_full_rank(validate_membership(ring_identity(3))).pinv == ring_identity(3)

    def test_closed_form(self):
        zs = lift(X0)
        K_inv, J = make_gram(2).K_inv, zs.row_op.matrix()
        res = pinv_full_rank(zs)
        assert res.pinv == J.T @ K_inv @ inverse(X0) @ K_inv @ J
        assert res.pinv == oracle_pinv(zs.widened)
        assert res.ok

    def test_true_inverse_in_ring(self, rng):
        for n in range(1, 7):
            zs = lift(random_full_rank(rng, n))
            G = pinv_full_rank(zs).pinv
            E = ring_identity(n + 1)
            assert zs.widened @ G == E and G @ zs.widened == E
            assert zero_sums(G)

    def test_rank_deficient(self):
        with pytest.raises(RankDeficientError) as exc:
            pinv_full_rank(lift(Q([[1, 2], [2, 4]])))
        assert exc.value.rank == 1 and "cholesky" in str(exc.value).lower()

    def test_rejects_insertions(self):
        with pytest.raises(PreconditionError):
            pinv_full_rank(lift(X0, ROW3, COL2))


class TestCholesky:
    def test_zero(self):
        res = pinv_cholesky(lift(Matrix.zeros(2, 2, FLOAT)))
        assert res.pinv.is_zero()

    def test_rank_one(self):
        A = Q([[1, -1, 0], [-1, 1, 0], [0, 0, 0]])
        res = pinv_cholesky(validate_membership(A).to_float())
        assert rel_err(res.pinv, A / 4) <= 1e-12
        assert res.ok

    def test_rank_two_in_S4(self, rng):
        zs = random_member(rng, 3, 2, min_sv=WELL_CONDITIONED)
        res = pinv_cholesky(zs.to_float())
        assert rel_err(res.pinv, oracle_pinv(zs.widened)) <= 1e-9
        assert zero_sums(res.pinv, 1e-10 * float(res.pinv.max_norm()))

    def test_nonsquare_rejected(self):
        with pytest.raises(PreconditionError):
            pinv_cholesky(lift(Matrix.zeros(2, 3, FLOAT)))

    def test_rational_input_is_computed_in_float(self):
        assert pinv_cholesky(lift(X0)).pinv.kernel == FLOAT

    @given(st.integers(0, 2**32 - 1), st.integers(1, 6), st.data())
    def test_matches_oracle_any_rank(self, seed, n, data):
        r = data.draw(st.integers(0, n))
        zs = random_member(np.random.default_rng(seed), n, r, min_sv=WELL_CONDITIONED)
        res = pinv_cholesky(zs.to_float())
        assert res.ok
        assert rel_err(res.pinv, oracle_pinv(zs.widened)) <= 1e-9


class TestLimit:
    def test_full_rank_monotone(self):
        zs = lift(X0)
        exact = pinv_full_rank(zs).pinv
        schedule = LimitSchedule(tuple(10.0 ** -k for k in range(3, 9)))
        res = pinv_limit(zs.to_float(), schedule)
        errors = [rel_err(it, exact) for it in res.trace.iterates]
        assert all(b < a for a, b in zip(errors, errors[1:]))
        assert rel_err(res.pinv, exact) <= 1e-9
        assert res.method == "limit"

    def test_zero_every_delta(self):
        res = pinv_limit(lift(Matrix.zeros(2, 2, FLOAT)))
        assert all(it.is_zero() for it in res.trace.iterates)
        assert res.pinv.is_zero()

    def test_rank_one(self):
        A = Q([[1, -1, 0], [-1, 1, 0], [0, 0, 0]])
        res = pinv_limit(validate_membership(A).to_float())
        assert rel_err(res.pinv, A / 4) <= 1e-9

    def test_agrees_with_cholesky(self, rng):
        for n in range(1, 6):
            for r in range(n + 1):
                zs = random_member(rng, n, r, FLOAT, min_sv=WELL_CONDITIONED)
                assert rel_err(pinv_limit(zs).pinv, pinv_cholesky(zs).pinv) <= 1e-9

    def test_rectangular(self, rng):
        zs = random_member(rng, 2, 2, cols=4, min_sv=WELL_CONDITIONED)
        assert rel_err(pinv_limit(zs.to_float()).pinv, oracle_pinv(zs.widened)) <= 1e-9

    def test_trace_contracts(self, rng):
        res = pinv_limit(random_member(rng, 4, 2, FLOAT, min_sv=WELL_CONDITIONED))
        t = res.trace
        assert len(t.iterates) == len(t.deltas) == 6
        assert all(c < 0.9 for c in t.contractions)
        assert t.error_estimate <= 1e-8

    def test_ill_conditioned_needs_finer_schedule(self):
        # singular values of X near 1e-3: the default deltas are not small
        # enough to be in the asymptotic regime
        X = Matrix([[1.0, 1.0], [1.0, 1.0 + 1e-3]], FLOAT)
        zs = lift(X)
        with pytest.raises(NonConvergenceError) as exc:
            pinv_limit(zs)
        assert len(exc.value.residuals) == 5
        res = pinv_limit(zs, LimitSchedule.geometric("1e-9", 10, 6))
        assert rel_err(res.pinv, oracle_pinv(lift(X.to_rational()).widened)) <= 1e-9


class TestSchedule:
    def test_default(self):
        s = LimitSchedule()
        assert [float(d) for d in s.deltas] == [10.0 ** -k for k in range(3, 9)]
        assert s.tol == 1e-8

    def test_decimal_exact(self):
        from fractions import Fraction

        assert LimitSchedule((1e-3, 1e-4)).deltas[0] == Fraction(1, 1000)

    def test_parse(self):
        assert len(LimitSchedule.parse("1e-3, 1e-4,1e-5").deltas) == 3

    @pytest.mark.parametrize("bad", [(1e-3,), (1e-3, 1e-2), (1e-3, 0), (1e-3, 1e-3)])
    def test_invalid(self, bad):
        with pytest.raises(ValueError):
            LimitSchedule(bad)


class TestNonsquare:
    def test_column_example(self):
        zs = lift(Q([[1], [2]]))
        assert zs.shape == (3, 2)
        res = pinv_nonsquare(zs.to_float())
        assert rel_err(res.pinv, oracle_pinv(zs.widened)) <= 1e-9
        assert res.ok

    def test_transpose(self, rng):
        for _ in range(10):
            zs = random_member(rng, 3, 2, cols=4, min_sv=WELL_CONDITIONED).to_float()
            G = pinv_nonsquare(zs).pinv
            Gt = pinv_nonsquare(validate_membership(zs.widened.T)).pinv
            assert rel_err(Gt, G.T) <= 1e-9

    def test_square_matches_cholesky(self, rng):
        zs = random_member(rng, 4, 3, FLOAT, min_sv=WELL_CONDITIONED)
        assert rel_err(pinv_nonsquare(zs).pinv, pinv_cholesky(zs).pinv) <= 1e-9

    @given(st.integers(0, 2**32 - 1), st.integers(1, 6), st.integers(1, 6), st.data())
    def test_matches_oracle(self, seed, m, n, data):
        r = data.draw(st.integers(0, min(m, n)))
        zs = random_member(np.random.default_rng(seed), m, r, cols=n, min_sv=WELL_CONDITIONED)
        res = pinv_nonsquare(zs.to_float())
        assert res.ok
        assert rel_err(res.pinv, oracle_pinv(zs.widened)) <= 1e-9


class TestOneSided:
    def test_rows_only_identity(self):
        res = pinv_rows_only(Matrix.identity(2))
        assert res.pinv == Q([[2, -1], [-1, 2], [-1, -1]]) / 3
        assert res.ok and res.method == "rows-only"

    def test_rows_only_tall(self):
        X = Q([[1, 0], [0, 1], [0, 0]])
        J = StructuralOperator(2).matrix()
        res = pinv_rows_only(X)
        assert res.pinv == oracle_pinv(X @ J)

    def test_rows_only_projector(self, rng):
        for n in range(1, 6):
            X = random_rank(rng, n + 1, n, n)
            J = StructuralOperator(n).matrix()
            G = pinv_rows_only(X).pinv
            assert G @ (X @ J) == J.T @ make_gram(n).K_inv @ J

    def test_cols_only_identity(self):
        res = pinv_cols_only(Matrix.identity(2))
        assert res.pinv == make_gram(2).K_inv @ StructuralOperator(2).matrix()

    def test_duality(self, rng):
        for _ in range(10):
            X = random_rank(rng, 4, 3, 3)
            assert pinv_cols_only(X.T).pinv == pinv_rows_only(X).pinv.T

    def test_cols_only_wide(self, rng):
        X = random_rank(rng, 2, 3, 2)
        J = StructuralOperator(2).matrix()
        res = pinv_cols_only(X)
        assert res.ok
        assert rel_err(pinv_cols_only(X.to_float()).pinv, oracle_pinv(J.T @ X)) <= 1e-9

    def test_not_left_invertible(self):
        with pytest.raises(RankDeficientError):
            pinv_rows_only(Q([[1, 2], [2, 4]]))

    def test_not_right_invertible(self):
        with pytest.raises(RankDeficientError):
            pinv_cols_only(Q([[1, 2, 3]]).T @ Q([[1, 2]]))

    def test_split(self):
        X = Q([[1, 2], [3, 4], [5, 6]])
        J = StructuralOperator(2).matrix()
        assert split_rows_only(X @ J) == X
        assert split_cols_only(J.T @ X.T) == X.T
        with pytest.raises(PreconditionError):
            split_rows_only(X)


class TestZeroInserted:
    def test_corrected_example(self):
        zs = lift(X0, ROW3, COL2)
        res = pinv_zero_inserted(zs)
        K_inv = make_gram(2).K_inv
        assert res.pinv == COL2.matrix().T @ K_inv @ inverse(X0) @ K_inv @ ROW3.matrix()
        assert res.pinv == oracle_pinv(zs.widened)
        assert all(r == 0 for r in res.report.residuals)

    def test_empty_insertions(self, rng):
        zs = lift(random_full_rank(rng, 3))
        assert pinv_zero_inserted(zs).pinv == pinv_full_rank(zs).pinv

    def test_zero_pattern(self, rng):
        for _ in range(10):
            zs = random_member(rng, 3, insert_rows=2, insert_cols=1)
            G = pinv_zero_inserted(zs).pinv
            assert G.shape == (zs.shape[1], zs.shape[0])
            for a in zs.insert_cols:
                assert G[a - 1].is_zero()
            for b in zs.insert_rows:
                assert G[:, b - 1].is_zero()

    def test_unequal_insertions(self, rng):
        zs = random_member(rng, 2, insert_rows=0, insert_cols=3)
        assert pinv_zero_inserted(zs).pinv == oracle_pinv(zs.widened)

    def test_singular(self):
        with pytest.raises(RankDeficientError):
            pinv_zero_inserted(lift(Q([[1, 2], [2, 4]]), ROW3, COL2))


class TestProjector:
    def test_no_insertions(self):
        assert projector(lift(X0)) == ring_identity(3)

    def test_inserted_second(self):
        P = projector(lift(X0, ROW3, COL2))
        assert P.shape == (4, 4)
        assert P[1].is_zero() and P[:, 1].is_zero()
        assert P == pinv_zero_inserted(lift(X0, ROW3, COL2)).pinv @ lift(X0, ROW3, COL2).widened

    def test_axioms(self, rng):
        for _ in range(10):
            P = projector(random_member(rng, 3, insert_rows=1, insert_cols=2))
            assert P @ P == P and P == P.T and rank(P) == 3

    def test_fixes_identity(self):
        J = StructuralOperator(2).matrix()
        zs = lift(X0)
        assert pinv_full_rank(zs).pinv @ zs.widened @ J.T == J.T
        assert projector_fixes(Matrix.identity(2), (), zs)

    def test_fixes_zero(self):
        assert projector_fixes(Matrix.zeros(2, 3), (), lift(X0))

    def test_fixes_random(self, rng):
        zs = lift(X0, ROW3, COL2)
        assert projector_fixes(random_matrix(rng, 2, 3), (2,), zs)

    def test_operator_mismatch(self):
        with pytest.raises(PreconditionError):
            projector_fixes(Matrix.identity(2), (3,), lift(X0, ROW3, COL2))

    def test_range_basis(self):
        B = projector_range_basis((), 2)
        assert B == Q([[1, 0], [0, 1], [-1, -1]])
        assert rank(B) == 2
        assert projector(lift(X0)) @ B == B

    def test_range_basis_inserted(self):
        B = projector_range_basis((2,), 2)
        assert B.shape == (4, 2) and B[1].is_zero()
        P = projector(lift(X0, ROW3, COL2))
        assert P @ B == B and rank(P) == rank(B) == 2


class TestNaive:
    def load(self):
        text = (FIXTURES / "naive_counterexample.json").read_text()
        return validate_membership(parse_matrix(text, "json").matrix)

    def test_fixture_fails_symmetry(self):
        zs = self.load()
        X = zs.compressed
        assert rank(X) == 1 and X != X.T
        rep = naive_pinv_counterexample(zs)
        assert rep.passed[0] and rep.passed[1]
        assert max(rep.residuals[2], rep.residuals[3]) > 1e-6

    def test_fixture_cholesky_passes(self):
        assert pinv_cholesky(self.load().to_float()).ok

    def test_full_rank_passes(self, rng):
        for n in range(1, 5):
            assert naive_pinv_counterexample(lift(random_full_rank(rng, n))).ok

    def test_symmetric_case_is_reported(self):
        rep = naive_pinv_counterexample(S([[1, -1, 0], [-1, 1, 0], [0, 0, 0]]))
        assert len(rep.residuals) == 4


class TestTwistedPseudoinverse:
    def test_any_twisted_pseudoinverse_lifts(self, rng):
        for n in range(1, 6):
            X = random_rank(rng, n, n, int(rng.integers(0, n + 1)))
            K_inv = make_gram(n).K_inv
            G = K_inv @ one_inverse(X, random_matrix(rng, n, n)) @ K_inv
            assert twisted_penrose_check(X, G).passed[0]
            lx = lift(X).widened
            assert lx @ lift(G).widened @ lx == lx

    def test_twisted_mp_inverse(self, rng):
        for n in range(1, 5):
            X = random_rank(rng, n, n, int(rng.integers(0, n + 1)))
            G = twisted_pinv(X)
            assert lift(G).widened == oracle_pinv(lift(X).widened)
            # penrose conditions of the twisted ring, symmetry taken literally
            rep = twisted_penrose_check(X, G)
            assert rep.passed[0] and rep.passed[1]


class TestClosureAndAgreement:
    def test_zero_sum_results(self, rng):
        for _ in range(10):
            zs = random_member(rng, 3, 2, min_sv=WELL_CONDITIONED)
            for G in (pinv_cholesky(zs.to_float()).pinv, pinv_limit(zs.to_float()).pinv):
                assert zero_sums(G, 1e-10 * float(G.max_norm()))

    def test_all_methods_agree_on_full_rank(self, rng):
        for n in range(1, 6):
            zs = lift(random_full_rank(rng, n, min_sv=WELL_CONDITIONED))
            exact = pinv_full_rank(zs).pinv
            assert pinv_zero_inserted(zs).pinv == exact
            for fn in (pinv_cholesky, pinv_limit, pinv_nonsquare):
                assert rel_err(fn(zs.to_float()).pinv, exact) <= 1e-9

    def test_reports_are_penrose_checks(self, rng):
        zs = lift(random_full_rank(rng, 3))
        res = pinv_full_rank(zs)
        assert res.report == penrose_check(zs.widened, res.pinv)
