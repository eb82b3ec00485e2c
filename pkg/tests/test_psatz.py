"""Tests for certificate assembly, acceptance bounds, and system building."""

import json

import pytest
from gmpy2 import mpq

from optpack.codes import SignMatrix, build_known_optimum
from optpack.exactmath import Polynomial, qq
from optpack.orbits import enumerate_reps, matching_blocks
from optpack.psatz import (
    Certificate,
    ConstraintSystem,
    assemble_h,
    build_subprogram_system,
    coefficient_bound,
    round_certificate,
    simpler_bound,
    verify_certificate,
)

TOY_VARS = ("x", "y")


def toy_system():
    f1 = Polynomial.from_str("x + -1 * y^2 + 3", TOY_VARS)
    g1 = Polynomial.from_str("x^2 + y + 2", TOY_VARS)
    return ConstraintSystem(TOY_VARS, (f1,), (g1,), mpq(11), "toy")


def toy_certificate():
    # h collapses to zero: s_{} + s_{1} f_1 + t g_1 = -1 identically
    q = [mpq(14, 15), mpq(6, 15), mpq(2, 15), mpq(2, 15)]
    empty_terms = []
    for c in q:
        empty_terms.append(Polynomial(TOY_VARS, {(2, 0): c}))
        empty_terms.append(
            Polynomial(TOY_VARS, {(1, 0): 2 * c, (0, 0): -c / 4})
        )
    one_terms = [Polynomial.constant(c, TOY_VARS) for c in q]
    t = Polynomial(
        TOY_VARS,
        {(2, 0): mpq(-16, 15), (0, 1): mpq(16, 15), (0, 0): mpq(-32, 15)},
    )
    return Certificate(
        (((), tuple(empty_terms)), ((0,), tuple(one_terms))),
        (t,),
        m1=4,
        m2=2,
        system_id="toy",
    )


class TestBounds:
    def test_toy_bound(self):
        # sum_{k<=4} C(k+1, k) 11^k = 1 + 22 + 363 + 5324 + 73205
        assert coefficient_bound(toy_system(), 4) == mpq(1, 78915)

    def test_degree_zero(self):
        assert coefficient_bound(toy_system(), 0) == 1

    def test_simpler_bound_requires_small_radius(self):
        with pytest.raises(ValueError):
            simpler_bound(toy_system())

    def test_simpler_never_beats_sharp(self):
        S = enumerate_reps(2, 6).representatives[0]
        sys = build_subprogram_system(S, 6)
        assert simpler_bound(sys) == mpq(3, 4) ** 5
        for deg in range(1, 7):
            assert simpler_bound(sys) <= coefficient_bound(sys, deg)


class TestVerify:
    def test_exact_certificate_accepted(self):
        res = verify_certificate(toy_certificate(), toy_system())
        assert res.accepted and res.reason == "exact"
        assert assemble_h(toy_certificate(), toy_system()).is_zero()

    @pytest.mark.parametrize("delta", [mpq(1, 1000), mpq(-1, 1000)])
    def test_perturbed_coefficient_rejected(self, delta):
        cert = toy_certificate()
        t = cert.ideal_multipliers[0] + Polynomial(TOY_VARS, {(2, 0): delta})
        bad = Certificate(cert.sos_blocks, (t,), cert.m1, cert.m2, "toy")
        res = verify_certificate(bad, toy_system())
        assert not res.accepted and res.reason == "bound exceeded"
        assert res.max_coeff > res.bound

    def test_degree_shape_rejected(self):
        cert = toy_certificate()
        shrunk = Certificate(cert.sos_blocks, cert.ideal_multipliers, 2, 2, "toy")
        assert "m1" in verify_certificate(shrunk, toy_system()).reason

    def test_multiplier_count_mismatch(self):
        cert = toy_certificate()
        bad = Certificate(cert.sos_blocks, (), cert.m1, cert.m2, "toy")
        assert not verify_certificate(bad, toy_system()).accepted

    def test_bad_subset_rejected(self):
        cert = toy_certificate()
        blocks = (((3,), cert.sos_blocks[1][1]),)
        bad = Certificate(blocks, cert.ideal_multipliers, cert.m1, cert.m2)
        assert "subset" in verify_certificate(bad, toy_system()).reason

    def test_tiny_residual_accepted_by_bound(self):
        # shift h away from zero by less than the threshold
        cert = toy_certificate()
        eps = mpq(1, 10**7)
        t = cert.ideal_multipliers[0] * (1 + eps)
        near = Certificate(cert.sos_blocks, (t,), cert.m1, cert.m2, "toy")
        res = verify_certificate(near, toy_system())
        assert res.accepted and res.reason == "bound"
        assert 0 < res.max_coeff <= res.bound


class TestSerialization:
    def test_system_round_trip(self):
        sys = toy_system()
        back = ConstraintSystem.from_json(sys.to_json())
        assert back.variables == sys.variables
        assert back.f == sys.f and back.g == sys.g and back.r == sys.r

    def test_certificate_round_trip(self):
        cert = toy_certificate()
        back = Certificate.from_json(cert.to_json(), TOY_VARS)
        assert back == cert
        assert verify_certificate(back, toy_system()).accepted

    def test_round_certificate(self):
        raw = {
            "system_id": "toy",
            "m1": 2,
            "m2": 0,
            "variables": list(TOY_VARS),
            "sos": {"0": ["0.333335 * x + -1.000004"]},
            "t": ["0.000001"],
        }
        cert = round_certificate(raw)
        ((subset, terms),) = cert.sos_blocks
        assert subset == (0,)
        assert terms[0].terms[(1, 0)] == mpq(33334, 100000)
        assert terms[0].terms[(0, 0)] == -1
        assert cert.ideal_multipliers[0].is_zero()


class TestSubprogramSystems:
    @pytest.mark.parametrize(
        "d,nf,ng", [(3, 6, 7), (4, 8, 9), (5, 8, 10), (6, 10, 12)]
    )
    def test_shapes(self, d, nf, ng):
        S = enumerate_reps(2, d).representatives[0]
        sys = build_subprogram_system(S, d)
        assert len(sys.f) == nf
        assert len(sys.g) == ng
        assert sys.variables[0] == "mu"
        assert len(sys.variables) == 1 + (d + 2) // 2

    def test_pair_variable_degree_drops(self):
        # the three minors attached to a pair leave that pair's variable at
        # degree <= 1; every variable has degree <= 2 everywhere
        S = enumerate_reps(2, 6).representatives[0]
        sys = build_subprogram_system(S, 6)
        pairs = matching_blocks(8)
        for k, (i, j) in enumerate(pairs):
            name = f"X_{i}_{j}"
            degs = [g.degree_in(name) for g in sys.g[3 * k : 3 * k + 3]]
            assert degs[0] == 0 and degs[1] == 0 and degs[2] <= 1
        for g in sys.g:
            assert all(g.degree_in(v) <= 2 for v in sys.variables[1:])

    def test_minors_match_numpy(self):
        import numpy as np

        S = enumerate_reps(2, 5).representatives[3]
        sys = build_subprogram_system(S, 5)
        rng = np.random.default_rng(7)
        point = {v: mpq(int(rng.integers(-9, 10)), 16) for v in sys.variables}
        n = S.n
        G = np.eye(n) * 1.0
        for i in range(n):
            for j in range(n):
                if S.rows[i][j]:
                    G[i, j] = S.rows[i][j] * float(point["mu"])
        for (i, j) in matching_blocks(n):
            G[i, j] = G[j, i] = float(point[f"X_{i}_{j}"])
        pairs = matching_blocks(n)
        drops = [rc for (i, j) in pairs for rc in ((i, i), (j, j), (i, j))]
        drops += [(0, 0)]
        for g, (r, c) in zip(sys.g, drops):
            M = np.delete(np.delete(G, r, axis=0), c, axis=1)
            assert float(g.eval(point)) == pytest.approx(
                np.linalg.det(M), abs=1e-8
            )

    def test_known_optimum_annihilates_d6_minors(self):
        # send the two sub-coherence entries of the n=8 optimum into matched
        # positions; all selected minors then vanish at the exact point
        G = build_known_optimum(6)
        p = [0, 2, 4, 5, 6, 1, 3, 7]
        H = [[None] * 8 for _ in range(8)]
        for i in range(8):
            for j in range(8):
                H[p[i]][p[j]] = G.entries[i][j]
        pairs = matching_blocks(8)
        rows = [[0] * 8 for _ in range(8)]
        for i in range(8):
            for j in range(8):
                if i == j or (min(i, j), max(i, j)) in pairs:
                    continue
                rows[i][j] = H[i][j].sign()
        S = SignMatrix(rows)
        sys = build_subprogram_system(S, 6)
        e02 = H[0][2]  # a +-b entry off the matching
        point = {"mu": e02 if e02.sign() > 0 else -e02}
        for (i, j) in pairs:
            point[f"X_{i}_{j}"] = H[i][j]
        for fpoly in sys.f:
            val = fpoly.eval(point)
            assert val.sign() >= 0
        for gpoly in sys.g:
            assert gpoly.eval(point).is_zero()

    def test_wrong_support_rejected(self):
        S = enumerate_reps(1, 5).representatives[0]
        with pytest.raises(ValueError):
            build_subprogram_system(S, 5)

    def test_unsupported_dimension(self):
        S = enumerate_reps(2, 5).representatives[0]
        with pytest.raises(ValueError):
            build_subprogram_system(S, 7)
