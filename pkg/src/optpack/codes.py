"""Projective codes as Gram matrices over a real number field.

A code of n lines is recorded by the Gram matrix of unit representatives,
which lives in the elliptope cut to rank <= d.  Everything here is exact:
entries are elements of Q(alpha) for a single designated algebraic alpha
(rational alpha degenerates to plain Q), and membership / coherence /
equivalence are decided without floating point.
"""

from __future__ import annotations

import json
from collections import Counter
from dataclasses import dataclass

from gmpy2 import mpq

from .exactmath import (
    AlgebraicNumber,
    FieldElement,
    NumberField,
    Polynomial,
    isolate_real_roots,
    psd_rank,
    qq,
)

# minimal polynomials of the optimal coherences, coefficients low to high
A_MINPOLY = (1, -1, -9, 1)  # x^3 - 9x^2 - x + 1
B_MINPOLY = (-1, -4, 20, 84, -53, -264, 106)
C_MINPOLY = (-32, 352, -347, -860, 814, 484, 53)

# c expressed in Q(b); found by resultant elimination and verified against
# C_MINPOLY on construction
_C_IN_B = (
    mpq(-9, 2),
    mpq(5, 8),
    mpq(383, 4),
    mpq(51, 8),
    mpq(-779, 2),
    mpq(583, 4),
)

_G5_SIGNS = (
    (0, -1, 1, -1, 1, -1, 1),
    (-1, 0, 1, 1, 1, -1, 1),
    (1, 1, 0, -1, 1, 1, -1),
    (-1, 1, -1, 0, 1, -1, -1),
    (1, 1, 1, 1, 0, 1, 1),
    (-1, -1, 1, -1, 1, 0, -1),
    (1, 1, -1, -1, 1, -1, 0),
)

# entries of G6: 'b'/'c' with sign; diagonal None
_G6_PATTERN = (
    (None, "b", "b", "-b", "b", "c", "b", "-b"),
    ("b", None, "-b", "-b", "-b", "-b", "-c", "-b"),
    ("b", "-b", None, "-b", "-b", "-b", "-b", "-b"),
    ("-b", "-b", "-b", None, "b", "-b", "b", "-b"),
    ("b", "-b", "-b", "b", None, "-b", "-b", "b"),
    ("c", "-b", "-b", "-b", "-b", None, "b", "-b"),
    ("b", "-c", "-b", "b", "-b", "b", None, "b"),
    ("-b", "-b", "-b", "-b", "b", "-b", "b", None),
)


class SignMatrix:
    """Symmetric n x n matrix over {-1, 0, +1} with zero diagonal."""

    __slots__ = ("n", "rows")

    def __init__(self, rows):
        rows = tuple(tuple(int(x) for x in r) for r in rows)
        n = len(rows)
        for i, r in enumerate(rows):
            if len(r) != n:
                raise ValueError("not square")
            if r[i] != 0:
                raise ValueError("nonzero diagonal")
            for j, x in enumerate(r):
                if x not in (-1, 0, 1):
                    raise ValueError("entries must be in {-1, 0, 1}")
                if x != rows[j][i]:
                    raise ValueError("not symmetric")
        self.n = n
        self.rows = rows

    def __eq__(self, other):
        return isinstance(other, SignMatrix) and self.rows == other.rows

    def __hash__(self):
        return hash(self.rows)

    def __repr__(self):
        return f"SignMatrix(n={self.n})"

    def support(self):
        """Edges {i, j} with a nonzero entry, i < j."""
        return [
            (i, j)
            for i in range(self.n)
            for j in range(i + 1, self.n)
            if self.rows[i][j] != 0
        ]

    def zero_pairs(self):
        """Off-diagonal positions (i, j), i < j, where the entry is zero."""
        return [
            (i, j)
            for i in range(self.n)
            for j in range(i + 1, self.n)
            if self.rows[i][j] == 0
        ]

    def to_json(self) -> str:
        return json.dumps({"n": self.n, "rows": [list(r) for r in self.rows]})

    @classmethod
    def from_json(cls, text: str) -> "SignMatrix":
        data = json.loads(text)
        return cls(data["rows"])


@dataclass(frozen=True)
class SignedPerm:
    """Element of the signed permutation group B_n: x_i -> sign_i x_perm[i]."""

    perm: tuple
    signs: tuple

    def __post_init__(self):
        if sorted(self.perm) != list(range(len(self.perm))):
            raise ValueError("not a permutation")
        if len(self.signs) != len(self.perm) or any(
            s not in (-1, 1) for s in self.signs
        ):
            raise ValueError("signs must be +-1 of matching length")

    @classmethod
    def identity(cls, n: int) -> "SignedPerm":
        return cls(tuple(range(n)), (1,) * n)

    def compose(self, other: "SignedPerm") -> "SignedPerm":
        """self after other: (self @ other)(x) = self(other(x))."""
        n = len(self.perm)
        perm = tuple(other.perm[self.perm[i]] for i in range(n))
        signs = tuple(self.signs[i] * other.signs[self.perm[i]] for i in range(n))
        return SignedPerm(perm, signs)

    def inverse(self) -> "SignedPerm":
        n = len(self.perm)
        inv = [0] * n
        sg = [1] * n
        for i in range(n):
            inv[self.perm[i]] = i
            sg[self.perm[i]] = self.signs[i]
        return SignedPerm(tuple(inv), tuple(sg))

    def conjugate_entries(self, rows):
        """Entries of P M P^T where row i of the result is sign_i * row perm[i]."""
        n = len(self.perm)
        return [
            [self.signs[i] * self.signs[j] * rows[self.perm[i]][self.perm[j]]
             for j in range(n)]
            for i in range(n)
        ]


class GramMatrix:
    """Symmetric unit-diagonal matrix with entries in Q(alpha)."""

    __slots__ = ("n", "field", "entries")

    def __init__(self, field: NumberField, entries):
        n = len(entries)
        entries = [[field.coerce(x) for x in row] for row in entries]
        for i in range(n):
            if len(entries[i]) != n:
                raise ValueError("not square")
            if not (entries[i][i] - 1).is_zero():
                raise ValueError("diagonal must be 1")
            for j in range(i):
                if not (entries[i][j] - entries[j][i]).is_zero():
                    raise ValueError("not symmetric")
        self.n = n
        self.field = field
        self.entries = entries

    def __repr__(self):
        return f"GramMatrix(n={self.n}, field={self.field!r})"

    @classmethod
    def identity(cls, n: int) -> "GramMatrix":
        F = NumberField(AlgebraicNumber.from_rational(0))
        return cls(F, [[1 if i == j else 0 for j in range(n)] for i in range(n)])

    def to_json(self) -> str:
        a = self.field.alpha
        rows = []
        for row in self.entries:
            rows.append(
                [Polynomial.univariate("alpha", e.coeffs).to_str() for e in row]
            )
        return json.dumps(
            {
                "n": self.n,
                "alpha": {
                    "minpoly": [int(c) for c in a.minpoly],
                    "lo": str(a.lo),
                    "hi": str(a.hi),
                },
                "entries": rows,
            }
        )

    @classmethod
    def from_json(cls, text: str) -> "GramMatrix":
        data = json.loads(text)
        ad = data["alpha"]
        alpha = AlgebraicNumber(ad["minpoly"], qq(ad["lo"]), qq(ad["hi"]))
        F = NumberField(alpha)
        entries = []
        for row in data["entries"]:
            out = []
            for s in row:
                p = Polynomial.from_str(s, ("alpha",))
                out.append(F.element(p.coefficients_univariate()))
            entries.append(out)
        return cls(F, entries)


def coherence(G: GramMatrix) -> FieldElement:
    """Largest off-diagonal magnitude, exact in Q(alpha)."""
    if G.n < 2:
        raise ValueError("need at least two lines")
    best = None
    for i in range(G.n):
        for j in range(i + 1, G.n):
            v = G.entries[i][j].abs()
            if best is None or (v - best).sign() > 0:
                best = v
    return best


def elliptope_member(G: GramMatrix, d: int) -> bool:
    """True iff G is PSD with rank at most d."""
    psd, rank = psd_rank(G.field, G.entries)
    return psd and rank <= d


def equivalent(G: GramMatrix, H: GramMatrix):
    """A SignedPerm P with P G P^T = H, or None.

    Backtracking over row images with sign propagation; the global sign flip
    is quotiented out by fixing the first assigned sign to +1.
    """
    if G.n != H.n:
        return None
    n = G.n
    try:
        Hent = [[G.field.coerce(x) for x in row] for row in H.entries]
    except ValueError:
        return None
    Gent = G.entries

    # quick invariant: multiset of squared off-diagonal entries per row
    def row_profile(rows, i):
        prof = {}
        for j in range(n):
            if j == i:
                continue
            key = tuple((rows[i][j] * rows[i][j]).coeffs)
            prof[key] = prof.get(key, 0) + 1
        return frozenset(prof.items())

    gprof = [row_profile(Gent, i) for i in range(n)]
    hprof = [row_profile(Hent, i) for i in range(n)]
    if Counter(gprof) != Counter(hprof):
        return None

    perm = [-1] * n  # perm[i] = row of G assigned to row i of H
    signs = [0] * n
    used = [False] * n

    def extend(i):
        if i == n:
            return True
        for cand in range(n):
            if used[cand] or gprof[cand] != hprof[i]:
                continue
            for s in (1, -1) if i > 0 else (1,):
                ok = True
                for j in range(i):
                    want = Hent[i][j]
                    got = Gent[cand][perm[j]]
                    if s * signs[j] == -1:
                        got = -got
                    if not (want - got).is_zero():
                        ok = False
                        break
                if ok:
                    perm[i] = cand
                    signs[i] = s
                    used[cand] = True
                    if extend(i + 1):
                        return True
                    used[cand] = False
            perm[i] = -1
        return False

    if not extend(0):
        return None
    return SignedPerm(tuple(perm), tuple(signs))


def bukh_cox_bound(d: int) -> mpq:
    """Coherence lower bound 3/(2d+1) for d+2 lines in dimension d."""
    if d < 2:
        raise ValueError("dimension must be at least 2")
    return mpq(3, 2 * d + 1)


def coherence_alpha(d: int) -> AlgebraicNumber:
    """The optimal coherence value for d in {5, 6} as an algebraic number."""
    if d == 5:
        return isolate_real_roots(list(A_MINPOLY))[1][0]
    if d == 6:
        return isolate_real_roots(list(B_MINPOLY))[1][0]
    raise ValueError("only d = 5 and d = 6 are supported")


def build_known_optimum(d: int) -> GramMatrix:
    """The optimal Gram matrix for d+2 lines in dimension d, d in {5, 6}."""
    alpha = coherence_alpha(d)
    F = NumberField(alpha)
    a = F.gen()
    if d == 5:
        entries = [
            [F.one() if i == j else _G5_SIGNS[i][j] * a for j in range(7)]
            for i in range(7)
        ]
        return GramMatrix(F, entries)
    c = F.element(list(_C_IN_B))
    # sanity: the expression for c must satisfy its published sextic
    acc = F.zero()
    for coef in reversed(C_MINPOLY):
        acc = acc * c + F.from_rational(coef)
    assert acc.is_zero(), "c-in-b expression violates its minimal polynomial"
    lut = {"b": a, "-b": -a, "c": c, "-c": -c}
    entries = [
        [F.one() if i == j else lut[_G6_PATTERN[i][j]] for j in range(8)]
        for i in range(8)
    ]
    return GramMatrix(F, entries)


@dataclass(frozen=True)
class GramFamily:
    """The subprogram data attached to a sign pattern S: candidate Gram
    matrices I + mu*S + X where X is supported off supp(I + S) and each
    |X_ij| <= mu."""

    sign: SignMatrix
    x_support: tuple

    def __post_init__(self):
        supp = set(self.sign.support())
        for (i, j) in self.x_support:
            if i >= j:
                raise ValueError("x_support positions must have i < j")
            if (i, j) in supp:
                raise ValueError("X overlaps the support of S")

    @classmethod
    def from_sign(cls, sign: SignMatrix) -> "GramFamily":
        return cls(sign, tuple(sign.zero_pairs()))

    @property
    def variables(self):
        return ("mu",) + tuple(f"X_{i}_{j}" for i, j in self.x_support)
