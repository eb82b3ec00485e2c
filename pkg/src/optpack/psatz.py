"""Approximate Positivstellensatz certificate checking.

A certificate consists of sum-of-squares blocks s_I (stored as the explicit
lists of polynomials being squared) attached to subsets I of the inequality
list f, and plain multipliers t_j for the equality list g.  The assembled
polynomial

    h = 1 + sum_I s_I prod_{i in I} f_i + sum_j t_j g_j

certifies P(f) & Z(g) empty whenever every coefficient of h is at most
[sum_{k<=deg h} C(nvars+k-1, k) r^k]^{-1} in absolute value, where r bounds
the sup-norm of any feasible point.  Assembly and the bound are exact over
the rationals, so an Accepted verdict is a proof.

This module also builds the constraint systems for the matched-pair
subprograms: box constraints on (mu, X) plus a deterministic selection of
vanishing minors of G = I + mu S + X that encode the rank deficit.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from math import comb

from gmpy2 import mpq

from .codes import SignMatrix
from .exactmath import Polynomial, qq, round_to_decimals
from .orbits import matching_blocks

# per-dimension window on mu and sup-norm radius of the feasible box; the
# upper ends are the smallest 5-decimal rationals above the known optima
# (coarser 241/1000 for d=6, matching the certificate fixtures)
MU_WINDOWS = {
    3: (mpq(3, 7), mpq(44722, 100000)),
    4: (mpq(1, 3), mpq(33334, 100000)),
    5: (mpq(3, 11), mpq(28621, 100000)),
    6: (mpq(3, 13), mpq(241, 1000)),
}
BOX_RADII = {3: mpq(1, 2), 4: mpq(1, 2), 5: mpq(3, 10), 6: mpq(1, 4)}


@dataclass(frozen=True)
class ConstraintSystem:
    variables: tuple
    f: tuple  # Polynomial inequalities, >= 0
    g: tuple  # Polynomial equalities, = 0
    r: mpq
    system_id: str = ""

    def __post_init__(self):
        if self.r <= 0:
            raise ValueError("box radius must be positive")
        for p in self.f + self.g:
            for v in p.variables:
                if v not in self.variables:
                    raise ValueError(f"undeclared variable {v}")

    def to_json(self) -> str:
        return json.dumps(
            {
                "system_id": self.system_id,
                "variables": list(self.variables),
                "f": [p.to_str() for p in self.f],
                "g": [p.to_str() for p in self.g],
                "r": str(self.r),
            }
        )

    @classmethod
    def from_json(cls, text: str) -> "ConstraintSystem":
        d = json.loads(text)
        varz = tuple(d["variables"])
        return cls(
            varz,
            tuple(Polynomial.from_str(s, varz) for s in d["f"]),
            tuple(Polynomial.from_str(s, varz) for s in d["g"]),
            qq(d["r"]),
            d.get("system_id", ""),
        )


@dataclass(frozen=True)
class Certificate:
    sos_blocks: tuple  # ((subset tuple, (Polynomial, ...)), ...)
    ideal_multipliers: tuple  # one Polynomial per g_j
    m1: int
    m2: int
    system_id: str = ""

    def blocks(self):
        return dict(self.sos_blocks)

    def to_json(self) -> str:
        sos = {
            ",".join(str(i) for i in subset): [p.to_str() for p in terms]
            for subset, terms in self.sos_blocks
        }
        return json.dumps(
            {
                "system_id": self.system_id,
                "m1": self.m1,
                "m2": self.m2,
                "sos": sos,
                "t": [p.to_str() for p in self.ideal_multipliers],
            }
        )

    @classmethod
    def from_json(cls, text: str, variables) -> "Certificate":
        d = json.loads(text)
        return cls(
            _parse_blocks(d["sos"], variables),
            tuple(Polynomial.from_str(s, variables) for s in d["t"]),
            int(d["m1"]),
            int(d["m2"]),
            d.get("system_id", ""),
        )


def _parse_blocks(sos, variables):
    out = []
    for key, terms in sos.items():
        subset = tuple(int(i) for i in key.split(",")) if key else ()
        out.append(
            (subset, tuple(Polynomial.from_str(s, variables) for s in terms))
        )
    return tuple(sorted(out))


def assemble_h(cert: Certificate, sys: ConstraintSystem) -> Polynomial:
    """1 + sum_I s_I prod_{i in I} f_i + sum_j t_j g_j, expanded over Q."""
    if len(cert.ideal_multipliers) != len(sys.g):
        raise ValueError("one multiplier required per equality")
    h = Polynomial.constant(1, sys.variables)
    for subset, terms in cert.sos_blocks:
        if any(i < 0 or i >= len(sys.f) for i in subset):
            raise ValueError("subset indexes outside the inequality list")
        s = Polynomial.constant(0, sys.variables)
        for p in terms:
            s = s + p * p
        prod = s
        for i in subset:
            prod = prod * sys.f[i]
        h = h + prod
    for t, g in zip(cert.ideal_multipliers, sys.g):
        h = h + t * g
    return h.with_variables(sys.variables)


def coefficient_bound(sys: ConstraintSystem, deg_h: int) -> mpq:
    """The acceptance threshold of the approximate Positivstellensatz."""
    if deg_h < 0:
        raise ValueError("negative degree")
    n = len(sys.variables)
    total = sum(comb(n + k - 1, k) * sys.r**k for k in range(deg_h + 1))
    return 1 / mpq(total)


def simpler_bound(sys: ConstraintSystem) -> mpq:
    """(1 - r)^nvars, valid whenever r < 1; never larger than the sharp one."""
    if sys.r >= 1:
        raise ValueError("simpler bound requires r < 1")
    return (1 - sys.r) ** len(sys.variables)


@dataclass(frozen=True)
class VerificationResult:
    accepted: bool
    reason: str = ""
    max_coeff: mpq = mpq(0)
    bound: mpq = mpq(0)
    witness: tuple = ()  # offending exponent vector on bound failure

    def __bool__(self):
        return self.accepted


def verify_certificate(cert: Certificate, sys: ConstraintSystem) -> VerificationResult:
    """Exact check of an approximate Positivstellensatz certificate.

    Accepted proves P(f) and Z(g) have empty intersection (given sys.r is a
    valid sup-norm bound on the feasible set, which the caller guarantees).
    """
    if len(cert.ideal_multipliers) != len(sys.g):
        return VerificationResult(False, "shape: multiplier count mismatch")
    for subset, terms in cert.sos_blocks:
        if any(i < 0 or i >= len(sys.f) for i in subset):
            return VerificationResult(False, "shape: bad inequality subset")
        if len(set(subset)) != len(subset):
            return VerificationResult(False, "shape: repeated index in subset")
        for p in terms:
            if 2 * p.total_degree() > cert.m1:
                return VerificationResult(False, "shape: SOS degree exceeds m1")
    for t in cert.ideal_multipliers:
        if not t.is_zero() and t.total_degree() > cert.m2:
            return VerificationResult(False, "shape: multiplier degree exceeds m2")
    h = assemble_h(cert, sys)
    if h.is_zero():
        return VerificationResult(True, "exact", mpq(0), coefficient_bound(sys, 0))
    bound = coefficient_bound(sys, h.total_degree())
    worst = max(h.terms, key=lambda e: abs(h.terms[e]))
    mx = abs(h.terms[worst])
    if mx <= bound:
        return VerificationResult(True, "bound", mx, bound)
    return VerificationResult(False, "bound exceeded", mx, bound, worst)


def round_certificate(raw, variables=None) -> Certificate:
    """Exact 5-decimal rounding of a numeric certificate.

    `raw` is the JSON object (or text) emitted by the generator, with
    coefficients as decimal strings inside the polynomial text form.
    """
    if isinstance(raw, str):
        raw = json.loads(raw)
    if variables is None:
        variables = tuple(raw["variables"])

    def rnd(p: Polynomial) -> Polynomial:
        return Polynomial(
            p.variables,
            {e: round_to_decimals(c, 5) for e, c in p.terms.items()},
        )

    blocks = tuple(
        (subset, tuple(rnd(p) for p in terms))
        for subset, terms in _parse_blocks(raw["sos"], variables)
    )
    t = tuple(rnd(Polynomial.from_str(s, variables)) for s in raw["t"])
    return Certificate(blocks, t, int(raw["m1"]), int(raw["m2"]), raw.get("system_id", ""))


# ---------------------------------------------------------------------------
# subprogram constraint systems
# ---------------------------------------------------------------------------


def _monomial_entries(S: SignMatrix, pairs, variables):
    """Entries of G = I + mu S + X as (coeff, exponent vector) monomials."""
    n = S.n
    nv = len(variables)
    vidx = {v: k for k, v in enumerate(variables)}
    zero_exp = (0,) * nv

    def mono(name):
        e = [0] * nv
        e[vidx[name]] = 1
        return tuple(e)

    mu_exp = mono("mu")
    entries = [[None] * n for _ in range(n)]
    for i in range(n):
        entries[i][i] = (1, zero_exp)
    for i in range(n):
        for j in range(n):
            if i == j:
                continue
            s = S.rows[i][j]
            if s != 0:
                entries[i][j] = (s, mu_exp)
    for (i, j) in pairs:
        e = mono(f"X_{i}_{j}")
        entries[i][j] = (1, e)
        entries[j][i] = (1, e)
    return entries


def _minor(entries, drop_row, drop_col):
    """Exact determinant of the minor, as a map exps -> integer coeff.

    Entries are single monomials, so the subset-DP determinant only ever
    multiplies a sparse polynomial by a monomial.
    """
    n = len(entries)
    rows = [r for r in range(n) if r != drop_row]
    cols = [c for c in range(n) if c != drop_col]
    m = len(rows)
    nv = len(entries[0][0][1])
    dets = {0: {(0,) * nv: 1}}
    for k in range(m):
        nxt = {}
        row = entries[rows[k]]
        for mask, poly in dets.items():
            if bin(mask).count("1") != k:
                continue
            pos = 0
            for ci, c in enumerate(cols):
                bit = 1 << ci
                if mask & bit:
                    pos += 1
                    continue
                cell = row[c]
                if cell is None:
                    continue
                coef, exps = cell
                sgn = -1 if (k + pos) % 2 else 1
                target = nxt.setdefault(mask | bit, {})
                cs = coef * sgn
                for e, v in poly.items():
                    ne = tuple(a + b for a, b in zip(e, exps))
                    target[ne] = target.get(ne, 0) + cs * v
        dets.update(nxt)
    full = (1 << m) - 1
    return {e: v for e, v in dets[full].items() if v}


def build_subprogram_system(
    S: SignMatrix, d: int, full_minors: bool = False, system_id: str = ""
) -> ConstraintSystem:
    """Box constraints plus vanishing minors for the matched-pair subprogram.

    The equality list takes, for every matched pair {i, j}, the three minors
    of G that delete (row, col) in {(i,i), (j,j), (i,j)} - each omits at
    least one occurrence of X_ij, so that variable has degree at most 1 -
    plus the principal minor deleting any unmatched vertex.  With
    full_minors, every (row, col) minor with row <= col is included instead;
    rank d matrices annihilate all of them, and the larger list sharpens
    interval elimination.
    """
    if d not in MU_WINDOWS:
        raise ValueError("unsupported dimension")
    n = d + 2
    if S.n != n:
        raise ValueError("sign pattern size does not match the dimension")
    pairs = matching_blocks(n)
    if S.zero_pairs() != pairs:
        raise ValueError("sign pattern is not in matched-pair form")
    variables = ("mu",) + tuple(f"X_{i}_{j}" for i, j in pairs)
    lo, hi = MU_WINDOWS[d]
    mu = Polynomial.variable("mu", variables)
    f = [mu - lo, hi - mu]
    for (i, j) in pairs:
        x = Polynomial.variable(f"X_{i}_{j}", variables)
        f.append(mu + x)
        f.append(mu - x)
    entries = _monomial_entries(S, pairs, variables)
    g = []
    if full_minors:
        for r in range(n):
            for c in range(r, n):
                g.append(Polynomial(variables, _minor(entries, r, c)))
    else:
        for (i, j) in pairs:
            for (r, c) in ((i, i), (j, j), (i, j)):
                g.append(Polynomial(variables, _minor(entries, r, c)))
        matched = {v for p in pairs for v in p}
        for v in range(n):
            if v not in matched:
                g.append(Polynomial(variables, _minor(entries, v, v)))
    return ConstraintSystem(
        variables, tuple(f), tuple(g), BOX_RADII[d], system_id=system_id
    )
