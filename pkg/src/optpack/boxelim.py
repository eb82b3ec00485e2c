"""Interval branch-and-bound emptiness prover with exact point verification.

A box is discarded only by sound tests: some inequality is negative over the
whole box, some equality is bounded away from zero, or (during survivor
classification) the box sits inside an excluded neighborhood of an exactly
verified solution.  Undiscarded boxes are bisected along the widest variable
until the depth budget runs out; whatever remains is reported as Residual.

Equalities can never be confirmed by intervals, so uniqueness claims go
through verify_solution_point: exact evaluation of every constraint at an
algebraic candidate, plus emptiness of the box minus candidate neighborhoods.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np
from gmpy2 import mpq

from .codes import GramMatrix, SignMatrix, elliptope_member
from .exactmath import (
    AlgebraicNumber,
    NumberField,
    Polynomial,
    RationalInterval,
    interval_eval,
    qq,
)
from .kernels import eval_box
from .psatz import ConstraintSystem

# exclusion radius around verified candidates; interval refutation stalls in
# the 10^-3 shell around the (singular) solution points, 10^-2 terminates
NEIGHBORHOOD_RADIUS = mpq(1, 100)


@dataclass(frozen=True)
class Box:
    intervals: tuple  # one RationalInterval per system variable

    @classmethod
    def cube(cls, nvars: int, radius) -> "Box":
        r = qq(radius)
        return cls(tuple(RationalInterval(-r, r) for _ in range(nvars)))

    @property
    def nvars(self) -> int:
        return len(self.intervals)

    def widest(self) -> int:
        widths = [iv.width for iv in self.intervals]
        return max(range(len(widths)), key=lambda i: (widths[i], -i))

    def split(self, i: int):
        iv = self.intervals[i]
        mid = (iv.lo + iv.hi) / 2
        left = self.intervals[:i] + (RationalInterval(iv.lo, mid),) + self.intervals[i + 1:]
        right = self.intervals[:i] + (RationalInterval(mid, iv.hi),) + self.intervals[i + 1:]
        return Box(left), Box(right)

    def float_bounds(self):
        lo = np.array([_f_down(iv.lo) for iv in self.intervals])
        hi = np.array([_f_up(iv.hi) for iv in self.intervals])
        return lo, hi

    def to_json_obj(self):
        return [[str(iv.lo), str(iv.hi)] for iv in self.intervals]


def _f_down(q) -> float:
    f = float(q)
    return f if mpq(f) <= q else math.nextafter(f, -math.inf)


def _f_up(q) -> float:
    f = float(q)
    return f if mpq(f) >= q else math.nextafter(f, math.inf)


def _compile_poly(poly, variables):
    p = poly.with_variables(variables)
    clo, chi, exps = [], [], []
    for e, c in sorted(p.terms.items()):
        clo.append(_f_down(c))
        chi.append(_f_up(c))
        exps.append(e)
    return (
        np.array(clo, dtype=np.float64),
        np.array(chi, dtype=np.float64),
        np.array(exps, dtype=np.int_).reshape(len(clo), len(variables)),
    )


def compile_system(sys: ConstraintSystem):
    """Coefficient/exponent arrays with outward-rounded coefficients."""
    fs = [_compile_poly(p, sys.variables) for p in sys.f]
    gs = [_compile_poly(p, sys.variables) for p in sys.g]
    return fs, gs


def feasible_box(sys: ConstraintSystem, base: Box | None = None) -> Box:
    """The r-cube contracted by the linear inequalities of the system.

    Hull consistency on the degree-1 constraints only; the result still
    contains every feasible point, so it is a sound starting box.
    """
    if base is None:
        base = Box.cube(len(sys.variables), sys.r)
    ivs = list(base.intervals)
    linear = [p for p in sys.f if p.total_degree() <= 1]
    for _ in range(2):
        for p in linear:
            for k, v in enumerate(sys.variables):
                unit = tuple(1 if i == k else 0 for i in range(len(ivs)))
                a = p.terms.get(unit, mpq(0))
                if a == 0:
                    continue
                rest = Polynomial(sys.variables, {
                    e: c for e, c in p.terms.items() if e != unit
                })
                env = {name: iv for name, iv in zip(sys.variables, ivs)}
                r = interval_eval(rest, env)
                # a v + rest >= 0
                if a > 0:
                    cut = ivs[k].intersect(
                        RationalInterval(-r.hi / a, ivs[k].hi)
                    )
                else:
                    cut = ivs[k].intersect(
                        RationalInterval(ivs[k].lo, -r.hi / a)
                    )
                if cut is None:
                    raise ValueError("linear constraints are inconsistent")
                ivs[k] = cut
    return Box(tuple(ivs))


@dataclass(frozen=True)
class EliminationResult:
    tag: str  # "Empty" or "Residual"
    boxes: tuple = ()
    reason: str = ""
    nodes: int = 0
    max_depth_seen: int = 0

    def __bool__(self):
        return self.tag == "Empty"


def _discard(fs, gs, blo, bhi, exclusions, box):
    """Index of a refuting constraint, or None if the box survives.

    Returns ("f", i), ("g", j), ("x", k) for inequality, equality, and
    excluded-neighborhood discards respectively.
    """
    for j, (clo, chi, exps) in enumerate(gs):
        lo, hi = eval_box(clo, chi, exps, blo, bhi)
        if lo > 0.0 or hi < 0.0:
            return ("g", j)
    for i, (clo, chi, exps) in enumerate(fs):
        lo, hi = eval_box(clo, chi, exps, blo, bhi)
        if hi < 0.0:
            return ("f", i)
    for k, nb in enumerate(exclusions):
        if all(
            iv.lo >= lo and iv.hi <= hi
            for iv, (lo, hi) in zip(box.intervals, nb)
        ):
            return ("x", k)
    return None


def _search(fs, gs, box, max_depth, exclusions, log=None):
    stack = [(box, 0)]
    nodes = 0
    deepest = 0
    residual = []
    while stack:
        b, depth = stack.pop()
        nodes += 1
        deepest = max(deepest, depth)
        blo, bhi = b.float_bounds()
        hit = _discard(fs, gs, blo, bhi, exclusions, b)
        if hit is not None:
            if log is not None:
                log.append((b, hit))
            continue
        if depth >= max_depth:
            residual.append(b)
            continue
        left, right = b.split(b.widest())
        stack.append((left, depth + 1))
        stack.append((right, depth + 1))
    return residual, nodes, deepest


_WORKER_STATE = {}


def _worker_init(sys_json, exclusions_str, max_depth):
    sys = ConstraintSystem.from_json(sys_json)
    _WORKER_STATE["compiled"] = compile_system(sys)
    _WORKER_STATE["exclusions"] = [
        [(qq(lo), qq(hi)) for lo, hi in nb] for nb in exclusions_str
    ]
    _WORKER_STATE["max_depth"] = max_depth


def _worker_run(task):
    box_obj, depth = task
    box = Box(tuple(RationalInterval(qq(lo), qq(hi)) for lo, hi in box_obj))
    fs, gs = _WORKER_STATE["compiled"]
    residual, nodes, deepest = _search(
        fs, gs, box, _WORKER_STATE["max_depth"] - depth, _WORKER_STATE["exclusions"]
    )
    return [b.to_json_obj() for b in residual], nodes, deepest + depth


def prove_empty(
    sys: ConstraintSystem,
    box: Box | None = None,
    max_depth: int = 40,
    jobs: int = 1,
    exclusions=(),
    log=None,
) -> EliminationResult:
    """Certify P(f) and Z(g) disjoint over the box, or return residual boxes.

    Empty is sound: every leaf was discarded by an outward-rounded interval
    test (or fell inside a caller-supplied excluded neighborhood).  The
    default box is the r-cube contracted by the linear inequalities.
    """
    if box is None:
        box = feasible_box(sys)
    if box.nvars != len(sys.variables):
        raise ValueError("box arity does not match the system")
    fs, gs = compile_system(sys)
    if jobs <= 1:
        residual, nodes, deepest = _search(fs, gs, box, max_depth, exclusions, log)
    else:
        # expand a breadth-first frontier, then farm subtrees out to a pool
        frontier = [(box, 0)]
        nodes, deepest = 0, 0
        residual = []
        while frontier and len(frontier) < 8 * jobs:
            b, depth = frontier.pop(0)
            nodes += 1
            deepest = max(deepest, depth)
            blo, bhi = b.float_bounds()
            if _discard(fs, gs, blo, bhi, exclusions, b) is not None:
                continue
            if depth >= max_depth:
                residual.append(b)
                continue
            left, right = b.split(b.widest())
            frontier.append((left, depth + 1))
            frontier.append((right, depth + 1))
        if frontier:
            exc = [
                [(str(lo), str(hi)) for lo, hi in nb] for nb in exclusions
            ]
            with ProcessPoolExecutor(
                max_workers=jobs,
                initializer=_worker_init,
                initargs=(sys.to_json(), exc, max_depth),
            ) as pool:
                tasks = [(b.to_json_obj(), depth) for b, depth in frontier]
                for rboxes, n, dp in pool.map(_worker_run, tasks):
                    nodes += n
                    deepest = max(deepest, dp)
                    for obj in rboxes:
                        residual.append(
                            Box(
                                tuple(
                                    RationalInterval(qq(lo), qq(hi))
                                    for lo, hi in obj
                                )
                            )
                        )
    if not residual:
        return EliminationResult("Empty", (), "", nodes, deepest)
    return EliminationResult(
        "Residual", tuple(residual), "depth-budget", nodes, deepest
    )


# ---------------------------------------------------------------------------
# exact point verification and survivor classification
# ---------------------------------------------------------------------------


def _value_sign(v) -> int:
    if hasattr(v, "sign"):
        return v.sign()
    q = qq(v)
    return -1 if q < 0 else (1 if q > 0 else 0)


def verify_solution_point(sys: ConstraintSystem, point) -> bool:
    """True iff every g vanishes and every f is nonnegative, exactly."""
    missing = [v for v in sys.variables if v not in point]
    if missing:
        raise ValueError(f"point misses variables {missing}")
    for g in sys.g:
        if _value_sign(g.eval(point)) != 0:
            return False
    return all(_value_sign(f.eval(point)) >= 0 for f in sys.f)


def _enclose(value, width) -> RationalInterval:
    if hasattr(value, "field"):
        return value.field.element_interval(value, width)
    return RationalInterval(qq(value))


def point_neighborhood(sys: ConstraintSystem, point, radius=NEIGHBORHOOD_RADIUS):
    """Per-variable rational bounds covering the radius-ball at the point."""
    nb = []
    for v in sys.variables:
        enc = _enclose(point[v], qq(radius) / 4)
        nb.append((enc.lo - radius, enc.hi + radius))
    return tuple(nb)


@dataclass(frozen=True)
class SurvivorOutcome:
    tag: str  # "ConfirmedUnique" or "Inconclusive"
    gram: GramMatrix | None = None
    residual: tuple = ()
    elimination: EliminationResult | None = None


def candidate_gram(S: SignMatrix, point) -> GramMatrix:
    """G = I + mu S + X at an exact candidate point."""
    fld = None
    for v in point.values():
        if hasattr(v, "field"):
            fld = v.field
            break
    if fld is None:
        fld = NumberField(AlgebraicNumber.from_rational(0))
    n = S.n
    mu = fld.coerce(point["mu"])
    entries = [
        [fld.one() if i == j else mu * S.rows[i][j] for j in range(n)]
        for i in range(n)
    ]
    for (i, j) in S.zero_pairs():
        entries[i][j] = fld.coerce(point[f"X_{i}_{j}"])
        entries[j][i] = entries[i][j]
    return GramMatrix(fld, entries)


def classify_survivor(
    S: SignMatrix,
    sys: ConstraintSystem,
    candidates,
    max_depth: int = 40,
    jobs: int = 1,
) -> SurvivorOutcome:
    """Decide whether the verified candidates exhaust the solution set.

    ConfirmedUnique requires (a) every candidate verifies exactly, (b) its
    Gram matrix sits in the rank-d elliptope, and (c) the box minus small
    neighborhoods of the candidates is provably empty.
    """
    if isinstance(candidates, dict):
        candidates = [candidates]
    if not candidates:
        raise ValueError("at least one exact candidate required")
    d = S.n - 2
    grams = []
    for point in candidates:
        if not verify_solution_point(sys, point):
            raise ValueError("candidate fails exact verification")
        grams.append(candidate_gram(S, point))
    exclusions = [point_neighborhood(sys, p) for p in candidates]
    res = prove_empty(sys, max_depth=max_depth, jobs=jobs, exclusions=exclusions)
    ok = res.tag == "Empty" and all(elliptope_member(G, d) for G in grams)
    if ok:
        return SurvivorOutcome("ConfirmedUnique", grams[0], (), res)
    return SurvivorOutcome("Inconclusive", grams[0], res.boxes, res)
