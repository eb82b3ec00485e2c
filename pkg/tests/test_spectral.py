"""Tests for the eigenvalue window, hypercube scan, and verdict logic."""

import pytest
from gmpy2 import mpq

from optpack.codes import SignMatrix, coherence_alpha
from optpack.exactmath import (
    AlgebraicNumber,
    NumberField,
    isolate_real_roots,
    matmul,
    transpose,
)
from optpack.orbits import enumerate_reps
from optpack.spectral import (
    TAG_CANDIDATE,
    TAG_LEMMA_A,
    TAG_WINDOW,
    conically_independent,
    factor_leading_block,
    hypercube_scan,
    min_eig,
    resolve_R1,
    window_filter,
)

D5_WINDOW = (mpq(3, 11), mpq(2863, 10000))
D6_WINDOW = (mpq(3, 13), mpq(2410, 10000))


def complete_graph_block(m):
    return [[0 if i == j else 1 for j in range(m)] for i in range(m)]


class TestMinEig:
    def test_complete_graph(self):
        lam, mult = min_eig(complete_graph_block(6))
        assert lam.compare(-1) == 0
        assert mult == 5

    def test_survivor_block(self):
        db = enumerate_reps(1, 5)
        a = coherence_alpha(5)
        hits = 0
        for S in db.representatives:
            block = [row[:6] for row in S.rows[:6]]
            lam, mult = min_eig(block)
            if mult == 1 and (-lam.inverse()).compare(a) == 0:
                hits += 1
        assert hits >= 1

    def test_min_eig_always_negative(self):
        for S in enumerate_reps(1, 3).representatives:
            block = [row[:4] for row in S.rows[:4]]
            lam, _ = min_eig(block)
            assert lam.sign() < 0


class TestWindowFilter:
    def test_complete_graph_rejected(self):
        assert not window_filter(AlgebraicNumber.from_rational(-1), *D5_WINDOW)

    def test_neg_inverse_a_accepted(self):
        a = coherence_alpha(5)
        lam = -(a.inverse())
        assert window_filter(lam, mpq(3, 11), a)
        assert window_filter(lam, *D5_WINDOW)

    def test_quarter_rejected_for_d6(self):
        assert not window_filter(AlgebraicNumber.from_rational(-4), *D6_WINDOW)

    def test_nonnegative_eigenvalue_rejected(self):
        with pytest.raises(ValueError):
            window_filter(AlgebraicNumber.from_rational(1), *D5_WINDOW)


class TestFactorData:
    def _survivor_factor(self):
        for S in enumerate_reps(1, 5).representatives:
            block = [row[:6] for row in S.rows[:6]]
            lam, mult = min_eig(block)
            if mult == 1 and window_filter(lam, *D5_WINDOW):
                return block, factor_leading_block(block)
        raise AssertionError("no window survivor found")

    def test_reconstruction(self):
        block, F = self._survivor_factor()
        m = len(block)
        fld = F.field
        inv_lam = fld.gen().inverse()
        M = [
            [
                (fld.one() if i == j else fld.zero()) - inv_lam * block[i][j]
                for j in range(m)
            ]
            for i in range(m)
        ]
        C = [list(r) for r in F.C]
        D = list(F.D)
        CD = [[C[i][k] * D[k] for k in range(len(D))] for i in range(m)]
        rec = matmul(CD, transpose(C))
        assert all(
            (rec[i][j] - M[i][j]).is_zero() for i in range(m) for j in range(m)
        )

    def test_pivots_positive(self):
        _, F = self._survivor_factor()
        assert all(d.sign() > 0 for d in F.D)

    def test_scan_symmetric_under_negation(self):
        # the quadratic form is even in y, so fixing y[0] = +1 loses nothing
        _, F = self._survivor_factor()
        scan = hypercube_scan(F)
        total = sum(len(v) for v in scan.values())
        assert total == 2 ** (len(F.C) - 1)

    def test_trivial_two_by_one_factor(self):
        # S' = [[0, 1], [1, 0]], lambda = -1: I + S' = C D C^T with
        # C = [1, 1]^T, D = [1]; then ||L^dagger y||^2 = (y0 + y1)^2 / 4
        F = factor_leading_block([[0, 1], [1, 0]])
        assert F.lam.compare(-1) == 0
        scan = hypercube_scan(F)
        assert scan["equal"] == ((1, 1),)
        assert scan["below"] == ((1, -1),)


class TestConicIndependence:
    def setup_method(self):
        self.F = NumberField(AlgebraicNumber.from_rational(0))

    def test_standard_basis(self):
        assert conically_independent(self.F, [[1, 0], [0, 1]])

    def test_scaled_copy(self):
        assert not conically_independent(self.F, [[1, 0], [2, 0]])

    def test_sum_of_others(self):
        assert not conically_independent(self.F, [[1, 0], [0, 1], [1, 1]])

    def test_opposite_pair_is_independent(self):
        assert conically_independent(self.F, [[1, 0], [-1, 0]])

    def test_empty_rejected(self):
        with pytest.raises(ValueError):
            conically_independent(self.F, [])


class TestResolveR1:
    def test_d5_tallies(self):
        a = coherence_alpha(5)
        tally = {}
        candidate = None
        for S in enumerate_reps(1, 5).representatives:
            v = resolve_R1(S, (mpq(3, 11), a))
            tally[v.tag] = tally.get(v.tag, 0) + 1
            if v.tag == TAG_CANDIDATE:
                candidate = v
        assert tally == {TAG_WINDOW: 14, TAG_LEMMA_A: 1, TAG_CANDIDATE: 1}
        assert candidate.mu.compare(a) == 0
        assert candidate.minimizer_ys

    def test_d6_tallies(self):
        tally = {}
        for S in enumerate_reps(1, 6).representatives:
            v = resolve_R1(S, D6_WINDOW)
            tally[v.tag] = tally.get(v.tag, 0) + 1
        assert tally == {TAG_WINDOW: 52, TAG_LEMMA_A: 2}

    def test_candidate_gram_is_feasible(self):
        from optpack.codes import GramMatrix, elliptope_member

        a = coherence_alpha(5)
        for S in enumerate_reps(1, 5).representatives:
            v = resolve_R1(S, (mpq(3, 11), a))
            if v.tag != TAG_CANDIDATE:
                continue
            fld = NumberField(a)
            mu = fld.gen()
            n = S.n
            for y in v.minimizer_ys:
                entries = [
                    [fld.one() if i == j else mu * S.rows[i][j] for j in range(n)]
                    for i in range(n)
                ]
                for i, val in enumerate(y):
                    entries[i][n - 1] = entries[i][n - 1] + mu * val
                    entries[n - 1][i] = entries[i][n - 1]
                G = GramMatrix(fld, entries)
                assert elliptope_member(G, 5)
                assert not elliptope_member(G, 4)

    def test_verdict_json(self):
        a = coherence_alpha(5)
        for i, S in enumerate(enumerate_reps(1, 5).representatives):
            v = resolve_R1(S, (mpq(3, 11), a))
            text = v.to_json(i)
            assert '"tag"' in text
