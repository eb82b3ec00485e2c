"""Spectral resolution of the isolated-vertex subprograms.

For a sign pattern S with an isolated last vertex, the subprogram value is
either infinity or -1/lambda, where lambda is the minimum eigenvalue of the
leading block S'.  Writing I - lambda^{-1} S' = L L^T with L of rank d, the
trichotomy is decided by scanning max over sign vectors y of ||L^dagger y||
against -lambda, and minimizers correspond to the y attaining equality.

No square roots are taken: from the exact factorization
P M P^T = B D B^T we keep C = P^T B (restricted to the rank columns) and D,
so L = C D^{1/2} and

    ||L^dagger y||^2 = y^T C W D^{-1} W C^T y,   W = (C^T C)^{-1},

a quadratic form over Q(lambda).  Conic independence of {L^dagger y} is
equivalent to that of {C^T y} because the two families differ by the fixed
invertible map D^{-1/2} W.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from itertools import product

from gmpy2 import mpq

from .codes import SignMatrix
from .exactmath import (
    AlgebraicNumber,
    NumberField,
    charpoly_coeffs,
    inverse,
    isolate_real_roots,
    ldlt,
    matmul,
    qq,
    transpose,
)


def min_eig(Sprime) -> tuple:
    """Exact (minimum eigenvalue, multiplicity) of a symmetric integer matrix."""
    rows = Sprime.rows if isinstance(Sprime, SignMatrix) else Sprime
    cp = charpoly_coeffs([list(r) for r in rows])
    lam, mult = isolate_real_roots(cp)[0]
    return lam, mult


def window_filter(lam: AlgebraicNumber, lower, upper) -> bool:
    """True iff lower <= -1/lambda <= upper, decided exactly."""
    if lam.sign() >= 0:
        raise ValueError("minimum eigenvalue must be negative")
    mu = (-lam).inverse()
    lo = (
        lower
        if isinstance(lower, AlgebraicNumber)
        else AlgebraicNumber.from_rational(qq(lower))
    )
    hi = (
        upper
        if isinstance(upper, AlgebraicNumber)
        else AlgebraicNumber.from_rational(qq(upper))
    )
    return mu.compare(lo) >= 0 and mu.compare(hi) <= 0


@dataclass(frozen=True)
class FactorData:
    """Square-root-free factorization data for I - lambda^{-1} S'."""

    lam: AlgebraicNumber
    multiplicity: int
    field: NumberField
    C: tuple  # (d+1) x d over Q(lambda), M = C diag(D) C^T
    D: tuple  # d positive pivots
    qmat: tuple  # (d+1) x (d+1): y^T qmat y = ||L^dagger y||^2


def factor_leading_block(Sprime) -> FactorData:
    rows = Sprime.rows if isinstance(Sprime, SignMatrix) else Sprime
    m = len(rows)
    lam, mult = min_eig(rows)
    if mult != 1:
        raise ValueError("minimum eigenvalue is not simple")
    F = NumberField(lam)
    lam_el = F.gen()
    inv_lam = lam_el.inverse()
    M = [
        [
            (F.one() if i == j else F.zero()) - inv_lam * rows[i][j]
            for j in range(m)
        ]
        for i in range(m)
    ]
    perm, B, D, rank, psd = ldlt(F, M)
    if not psd or rank != m - 1:
        raise ValueError("factorization does not have corank one")
    d = rank
    C = [[None] * d for _ in range(m)]
    for i in range(m):
        for k in range(d):
            C[perm[i]][k] = B[i][k]
    Ct = transpose(C)
    W = inverse(F, matmul(Ct, C))
    Dinv = [
        [D[i].inverse() if i == j else F.zero() for j in range(d)]
        for i in range(d)
    ]
    qmat = matmul(matmul(C, W), matmul(Dinv, matmul(W, Ct)))
    return FactorData(
        lam,
        mult,
        F,
        tuple(tuple(r) for r in C),
        tuple(D[:d]),
        tuple(tuple(r) for r in qmat),
    )


def hypercube_scan(F: FactorData):
    """Partition sign vectors (first coordinate +1) by ||L^dagger y|| vs -lambda.

    Returns dict with keys "below", "equal", "above" mapping to tuples of y.
    The full partition follows by y -> -y symmetry.
    """
    m = len(F.C)
    lam2 = F.field.gen() * F.field.gen()
    out = {"below": [], "equal": [], "above": []}
    for tail in product((1, -1), repeat=m - 1):
        y = (1,) + tail
        q = F.field.zero()
        for i in range(m):
            for j in range(m):
                t = F.qmat[i][j]
                if y[i] * y[j] == 1:
                    q = q + t
                else:
                    q = q - t
        s = (q - lam2).sign()
        out["below" if s < 0 else "equal" if s == 0 else "above"].append(y)
    return {k: tuple(v) for k, v in out.items()}


# ---------------------------------------------------------------------------
# conic independence (exact phase-one simplex)
# ---------------------------------------------------------------------------


def _in_cone(field: NumberField, generators, target) -> bool:
    """Is target a nonnegative combination of the generator vectors?

    Phase-one simplex with Bland's rule over the field; exact and finite.
    """
    m = len(target)
    k = len(generators)
    zero, one = field.zero(), field.one()
    T = []
    for i in range(m):
        row = [field.coerce(g[i]) for g in generators]
        row += [one if i == j else zero for j in range(m)]
        row.append(field.coerce(target[i]))
        if row[-1].sign() < 0:
            row = [-x for x in row]
        T.append(row)
    basis = [k + i for i in range(m)]
    ncols = k + m
    while True:
        # reduced costs for the artificial-sum objective
        enter = -1
        for j in range(ncols):
            if j in basis:
                continue
            r = one if j >= k else zero
            for i in range(m):
                if basis[i] >= k:
                    r = r - T[i][j]
            if r.sign() < 0:
                enter = j
                break
        if enter < 0:
            break
        leave = -1
        best = None
        for i in range(m):
            if T[i][enter].sign() <= 0:
                continue
            ratio = T[i][-1] / T[i][enter]
            if (
                best is None
                or (ratio - best).sign() < 0
                or ((ratio - best).sign() == 0 and basis[i] < basis[leave])
            ):
                best = ratio
                leave = i
        if leave < 0:
            return False  # objective unbounded cannot happen; defensive
        piv = T[leave][enter].inverse()
        T[leave] = [x * piv for x in T[leave]]
        for i in range(m):
            if i != leave and not T[i][enter].is_zero():
                f = T[i][enter]
                T[i] = [a - f * b for a, b in zip(T[i], T[leave])]
        basis[leave] = enter
    obj = zero
    for i in range(m):
        if basis[i] >= k:
            obj = obj + T[i][-1]
    return obj.is_zero()


def conically_independent(field: NumberField, vectors) -> bool:
    """True iff no vector is a nonnegative combination of the others."""
    if not vectors:
        raise ValueError("empty vector list")
    for j in range(len(vectors)):
        others = [v for i, v in enumerate(vectors) if i != j]
        if not others:
            return True
        if _in_cone(field, others, vectors[j]):
            return False
    return True


# ---------------------------------------------------------------------------
# full resolution
# ---------------------------------------------------------------------------

TAG_WINDOW = "EliminatedByWindow"
TAG_LEMMA_A = "EliminatedByLemmaA"
TAG_CANDIDATE = "Candidate"
TAG_UNRESOLVED = "Unresolved"


@dataclass(frozen=True)
class R1Verdict:
    tag: str
    lam: AlgebraicNumber | None = None
    multiplicity: int | None = None
    mu: AlgebraicNumber | None = None
    minimizer_ys: tuple = ()

    def to_json(self, s_id) -> str:
        data = {"S_id": s_id, "tag": self.tag}
        if self.mu is not None:
            data["mu"] = {
                "minpoly": [int(c) for c in self.mu.minpoly],
                "lo": str(self.mu.lo),
                "hi": str(self.mu.hi),
            }
        if self.minimizer_ys:
            data["Y"] = [list(y) for y in self.minimizer_ys]
        return json.dumps(data)


def _z_bordered(S: SignMatrix, y):
    """S + Z(y): the sign matrix with its last row/column filled by y."""
    n = S.n
    rows = [list(r) for r in S.rows]
    for i, v in enumerate(y):
        rows[i][n - 1] = v
        rows[n - 1][i] = v
    return rows


def resolve_R1(S: SignMatrix, window) -> R1Verdict:
    """Classify one isolated-vertex sign pattern.

    window = (lower, upper) brackets the optimal coherence; patterns whose
    -1/lambda falls outside are discarded immediately.
    """
    n = S.n
    block = [row[: n - 1] for row in S.rows[: n - 1]]
    lam, mult = min_eig(block)
    if not window_filter(lam, window[0], window[1]):
        return R1Verdict(TAG_WINDOW, lam, mult)
    if mult != 1:
        return R1Verdict(TAG_UNRESOLVED, lam, mult)
    F = factor_leading_block(block)
    scan = hypercube_scan(F)
    if scan["above"]:
        return R1Verdict(TAG_UNRESOLVED, lam, mult)
    if not scan["equal"]:
        return R1Verdict(TAG_LEMMA_A, lam, mult)
    # candidate minimizers: the equality set, closed under y -> -y
    ys = list(scan["equal"]) + [tuple(-v for v in y) for y in scan["equal"]]
    Ct = transpose([list(r) for r in F.C])
    images = [
        [
            sum((Ct[r][i] * y[i] for i in range(n - 1)), F.field.zero())
            for r in range(len(Ct))
        ]
        for y in ys
    ]
    if not conically_independent(F.field, images):
        return R1Verdict(TAG_UNRESOLVED, lam, mult)
    for y in ys:
        roots = isolate_real_roots(charpoly_coeffs(_z_bordered(S, y)))
        lam2, mult2 = roots[0]
        if lam2.compare(lam) != 0 or mult2 != 2:
            return R1Verdict(TAG_UNRESOLVED, lam, mult)
    mu = (-lam).inverse()
    return R1Verdict(TAG_CANDIDATE, lam, mult, mu, tuple(ys))
