"""Tests for interval box elimination and exact candidate verification."""

import itertools
import math
import random

import numpy as np
import pytest
from gmpy2 import mpq

from optpack import kernels
from optpack.boxkernel_py import eval_box as eval_box_py
from optpack.boxelim import (
    Box,
    NEIGHBORHOOD_RADIUS,
    candidate_gram,
    classify_survivor,
    compile_system,
    feasible_box,
    point_neighborhood,
    prove_empty,
    verify_solution_point,
    _f_down,
    _f_up,
)
from optpack.codes import build_known_optimum, coherence_alpha, equivalent
from optpack.exactmath import (
    AlgebraicNumber,
    NumberField,
    Polynomial,
    RationalInterval,
    isolate_real_roots,
    qq,
)
from optpack.orbits import enumerate_reps, matching_blocks
from optpack.psatz import ConstraintSystem, build_subprogram_system

V2 = ("x", "y")


def toy_system():
    f1 = Polynomial.from_str("x + -1 * y^2 + 3", V2)
    g1 = Polynomial.from_str("x^2 + y + 2", V2)
    return ConstraintSystem(V2, (f1,), (g1,), mpq(11), "toy")


def circle_system():
    g = Polynomial.from_str("x^2 + y^2 + -1/4", V2)
    return ConstraintSystem(V2, (), (g,), mpq(1))


def d5_candidates(sys, pairs):
    a = coherence_alpha(5)
    mu = NumberField(a).gen()
    out = []
    for signs in itertools.product((1, -1), repeat=3):
        pt = {"mu": mu}
        for s, (i, j) in zip(signs, pairs):
            pt[f"X_{i}_{j}"] = mu * s
        if verify_solution_point(sys, pt):
            out.append(pt)
    return out


class TestKernels:
    def test_backend_reported(self):
        assert kernels.BACKEND in ("compiled", "python")

    def test_backends_agree_bitwise(self):
        if kernels.BACKEND != "compiled":
            pytest.skip("compiled kernel unavailable")
        rng = random.Random(0)
        for _ in range(200):
            nt, nv = rng.randint(1, 6), rng.randint(1, 4)
            clo = np.array([rng.uniform(-3, 3) for _ in range(nt)])
            chi = clo + np.array([rng.uniform(0, 1e-12) for _ in range(nt)])
            exps = np.array(
                [[rng.randint(0, 3) for _ in range(nv)] for _ in range(nt)],
                dtype=np.int_,
            )
            blo = np.array([rng.uniform(-2, 2) for _ in range(nv)])
            bhi = blo + np.array([rng.uniform(0, 1) for _ in range(nv)])
            assert kernels.eval_box(clo, chi, exps, blo, bhi) == eval_box_py(
                clo, chi, exps, blo, bhi
            )

    def test_enclosure_contains_samples(self):
        rng = random.Random(1)
        p = Polynomial.from_str("2 * x^2 * y + -1/3 * y^2 + x + -5", V2)
        ((clo, chi, exps),) = [c for c in compile_system(
            ConstraintSystem(V2, (p,), (), mpq(4))
        )[0]]
        blo = np.array([-1.5, 0.25])
        bhi = np.array([0.5, 2.0])
        lo, hi = kernels.eval_box(clo, chi, exps, blo, bhi)
        for _ in range(500):
            x = rng.uniform(blo[0], bhi[0])
            y = rng.uniform(blo[1], bhi[1])
            v = 2 * x * x * y - y * y / 3 + x - 5
            assert lo <= v <= hi

    def test_directed_float_conversion(self):
        for q in (mpq(1, 3), mpq(-1, 3), mpq(1, 2), mpq(10**30) + 1, mpq(0)):
            assert mpq(_f_down(q)) <= q <= mpq(_f_up(q))
        assert _f_down(mpq(1, 2)) == 0.5 == _f_up(mpq(1, 2))


class TestBox:
    def test_cube(self):
        b = Box.cube(3, mpq(1, 4))
        assert b.nvars == 3
        assert all(iv.lo == mpq(-1, 4) and iv.hi == mpq(1, 4) for iv in b.intervals)

    def test_split_widest(self):
        b = Box((RationalInterval(0, 1), RationalInterval(0, 4)))
        assert b.widest() == 1
        left, right = b.split(1)
        assert left.intervals[1].hi == 2 == right.intervals[1].lo
        assert left.intervals[0] == b.intervals[0]

    def test_float_bounds_outward(self):
        b = Box((RationalInterval(mpq(1, 3), mpq(2, 3)),))
        lo, hi = b.float_bounds()
        assert mpq(lo[0]) <= mpq(1, 3) and mpq(hi[0]) >= mpq(2, 3)

    def test_feasible_box_contraction(self):
        S = enumerate_reps(2, 5).representatives[0]
        sys = build_subprogram_system(S, 5)
        box = feasible_box(sys)
        assert box.intervals[0].lo == mpq(3, 11)
        assert box.intervals[0].hi == mpq(28621, 100000)
        for iv in box.intervals[1:]:
            assert iv.lo == -mpq(28621, 100000) and iv.hi == mpq(28621, 100000)


class TestProveEmpty:
    def test_unsatisfiable_equality_immediate(self):
        g = Polynomial.from_str("x^2 + 1", ("x",))
        sys = ConstraintSystem(("x",), (), (g,), mpq(5))
        res = prove_empty(sys, max_depth=0)
        assert res.tag == "Empty" and res.nodes == 1

    def test_toy_system_empty(self):
        res = prove_empty(toy_system(), box=Box.cube(2, 11), max_depth=40)
        assert res.tag == "Empty"

    def test_monotone_in_depth(self):
        sys = toy_system()
        box = Box.cube(2, 11)
        first_empty = None
        for k in range(0, 31, 2):
            res = prove_empty(sys, box=box, max_depth=k)
            if first_empty is None and res.tag == "Empty":
                first_empty = k
            if first_empty is not None:
                assert res.tag == "Empty"
        assert first_empty is not None

    def test_residual_volume_shrinks(self):
        sys = circle_system()

        def volume(res):
            return sum(
                math.prod(float(iv.width) for iv in b.intervals)
                for b in res.boxes
            )

        vols = []
        for k in (6, 8, 10, 12):
            res = prove_empty(sys, max_depth=k)
            assert res.tag == "Residual" and res.reason == "depth-budget"
            vols.append(volume(res))
        assert all(a >= b for a, b in zip(vols, vols[1:]))

    def test_parallel_matches_serial(self):
        sys = circle_system()
        serial = prove_empty(sys, max_depth=8)
        parallel = prove_empty(sys, max_depth=8, jobs=2)
        key = lambda b: tuple((iv.lo, iv.hi) for iv in b.intervals)
        assert sorted(map(key, serial.boxes)) == sorted(map(key, parallel.boxes))

    def test_parallel_empty(self):
        res = prove_empty(toy_system(), box=Box.cube(2, 11), max_depth=40, jobs=2)
        assert res.tag == "Empty"

    def test_proof_log_records_refutations(self):
        g = Polynomial.from_str("x^2 + 1", ("x",))
        sys = ConstraintSystem(("x",), (), (g,), mpq(5))
        log = []
        prove_empty(sys, max_depth=0, log=log)
        assert log == [(Box.cube(1, 5), ("g", 0))]

    def test_arity_mismatch(self):
        with pytest.raises(ValueError):
            prove_empty(toy_system(), box=Box.cube(3, 1))


class TestVerifyPoint:
    def setup_method(self):
        self.pairs = matching_blocks(7)
        self.reps = enumerate_reps(2, 5).representatives

    def test_survivor_candidate_true(self):
        sys = build_subprogram_system(self.reps[30], 5, full_minors=True)
        cands = d5_candidates(sys, self.pairs)
        assert len(cands) == 1

    def test_rational_point_false(self):
        sys = build_subprogram_system(self.reps[30], 5)
        pt = {"mu": mpq(1, 3), "X_1_2": mpq(0), "X_3_4": mpq(0), "X_5_6": mpq(0)}
        assert not verify_solution_point(sys, pt)

    def test_window_violation_false(self):
        sys = build_subprogram_system(self.reps[30], 5)
        pt = {"mu": mpq(1, 4), "X_1_2": mpq(0), "X_3_4": mpq(0), "X_5_6": mpq(0)}
        assert not verify_solution_point(sys, pt)

    def test_missing_variable_rejected(self):
        sys = build_subprogram_system(self.reps[30], 5)
        with pytest.raises(ValueError):
            verify_solution_point(sys, {"mu": mpq(1, 3)})

    def test_neighborhood_covers_point(self):
        sys = build_subprogram_system(self.reps[30], 5, full_minors=True)
        (pt,) = d5_candidates(sys, self.pairs)
        nb = point_neighborhood(sys, pt)
        a = coherence_alpha(5)
        for v, (lo, hi) in zip(sys.variables, nb):
            assert hi - lo >= 2 * NEIGHBORHOOD_RADIUS
            val = pt[v]
            enc = val.field.element_interval(val, mpq(1, 10**6))
            assert lo <= enc.lo and enc.hi <= hi


class TestClassifySurvivor:
    def test_d5_survivor_confirmed(self):
        reps = enumerate_reps(2, 5).representatives
        S = reps[30]
        sys = build_subprogram_system(S, 5, full_minors=True)
        cands = d5_candidates(sys, matching_blocks(7))
        out = classify_survivor(S, sys, cands)
        assert out.tag == "ConfirmedUnique"
        assert out.elimination.tag == "Empty"
        assert equivalent(out.gram, build_known_optimum(5)) is not None

    def test_two_solution_system_needs_both_candidates(self):
        # a d=3 representative admitting two exact solutions
        mu_alg = isolate_real_roots([-1, 0, 5])[-1][0]
        mu = NumberField(mu_alg).gen()
        pairs = matching_blocks(5)
        for S in enumerate_reps(2, 3).representatives:
            sys = build_subprogram_system(S, 3, full_minors=True)
            cands = []
            for signs in itertools.product((1, -1), repeat=2):
                pt = {"mu": mu}
                for s, (i, j) in zip(signs, pairs):
                    pt[f"X_{i}_{j}"] = mu * s
                if verify_solution_point(sys, pt):
                    cands.append(pt)
            if len(cands) == 2:
                break
        else:
            raise AssertionError("no two-solution representative found")
        partial = classify_survivor(S, sys, cands[0])
        assert partial.tag == "Inconclusive" and partial.residual
        both = classify_survivor(S, sys, cands)
        assert both.tag == "ConfirmedUnique"

    def test_unverified_candidate_rejected(self):
        reps = enumerate_reps(2, 5).representatives
        sys = build_subprogram_system(reps[30], 5)
        bad = {"mu": mpq(28, 100), "X_1_2": mpq(0), "X_3_4": mpq(0), "X_5_6": mpq(0)}
        with pytest.raises(ValueError):
            classify_survivor(reps[30], sys, bad)

    def test_candidate_gram_rational(self):
        # rank-1 feasible point mu = 1, X = 1 on the all-plus 3x3 pattern
        from optpack.codes import SignMatrix, elliptope_member

        S = SignMatrix([[0, 0, 1], [0, 0, 1], [1, 1, 0]])
        G = candidate_gram(S, {"mu": mpq(1), "X_0_1": mpq(1)})
        assert elliptope_member(G, 1)
