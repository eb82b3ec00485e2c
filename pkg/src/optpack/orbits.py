"""Orbit enumeration for sign patterns under signed permutations.

Two families of sign matrices show up (one per admissible support graph):

  species 1: support is a complete graph on the first n-1 vertices plus an
             isolated last vertex;
  species 2: support is the complement of a maximum matching (perfect for
             even n; vertex 0 left unmatched for odd n).

The stabilizer of each support inside the signed permutation group acts on
the +-1 assignments of the support.  Sign flips are quotiented out up front
by a switching normalization that pins a spanning set of entries to +1, so
the residual action of the vertex permutations on the remaining free
entries is linear over F2.  Orbits are then found by label propagation over
all 2^k normalized codes (k <= 21), which also gives exact canonicalization.

|R2| is additionally available through the Burnside count of the paper
trail in the group itself, summing 2^{k(P)} over elements with no
odd-signed edge cycle; the sign-flip part of that sum collapses to a rank
computation over F2, so only the permutation part is enumerated.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from functools import lru_cache
from itertools import permutations, product
from math import factorial

import numpy as np

from .codes import SignMatrix, SignedPerm

SPECIES1_DIMS = (3, 4, 5, 6, 7)
SPECIES2_DIMS = (3, 4, 5, 6)


# ---------------------------------------------------------------------------
# support structure
# ---------------------------------------------------------------------------


def matching_blocks(n):
    """The matched vertex pairs; vertex 0 is unmatched when n is odd."""
    if n % 2:
        return [(2 * i + 1, 2 * i + 2) for i in range(n // 2)]
    return [(2 * i, 2 * i + 1) for i in range(n // 2)]


def support_pairs(species, n):
    """Positions (i, j), i < j, where the sign matrix is +-1."""
    if species == 1:
        return [(i, j) for i in range(n - 1) for j in range(i + 1, n - 1)]
    blocked = set(matching_blocks(n))
    return [
        (i, j)
        for i in range(n)
        for j in range(i + 1, n)
        if (i, j) not in blocked
    ]


def _normalized_pairs(species, n):
    """(free, fixed): fixed pairs are pinned to +1 by switching."""
    sup = support_pairs(species, n)
    if species == 1:
        fixed = {(0, j) for j in range(1, n - 1)}
    elif n % 2:
        fixed = {(0, j) for j in range(1, n)}
    else:
        fixed = {(0, j) for j in range(2, n)} | {(1, 2)}
    free = [p for p in sup if p not in fixed]
    return free, fixed


def _perm_generators(species, n):
    """Vertex permutations generating the support stabilizer mod sign flips."""
    gens = []
    if species == 1:
        for a in range(n - 2):
            p = list(range(n))
            p[a], p[a + 1] = a + 1, a
            gens.append(tuple(p))
        return gens
    blks = matching_blocks(n)
    p = list(range(n))
    a, b = blks[0]
    p[a], p[b] = b, a
    gens.append(tuple(p))
    for k in range(len(blks) - 1):
        (a, b), (c, d) = blks[k], blks[k + 1]
        p = list(range(n))
        p[a], p[c] = c, a
        p[b], p[d] = d, b
        gens.append(tuple(p))
    return gens


def _linear_maps(species, n):
    """For each generator, the F2-linear image of every free entry.

    Applying a vertex permutation to a normalized code and re-normalizing
    makes each output bit the XOR of a fixed set of input bits.
    """
    free, _ = _normalized_pairs(species, n)
    idx = {p: k for k, p in enumerate(free)}

    def ebit(x, y):
        if x > y:
            x, y = y, x
        return idx.get((x, y))  # None: fixed (+1) or off-support (0)

    maps = []
    for perm in _perm_generators(species, n):
        imgs = []
        for (i, j) in free:
            if species == 1 or n % 2:
                refs = [
                    (perm[i], perm[j]),
                    (perm[0], perm[i]),
                    (perm[0], perm[j]),
                ]
            else:
                def tail(v):
                    if v == 0:
                        return []
                    if v == 1:
                        return [(perm[1], perm[2]), (perm[0], perm[2])]
                    return [(perm[0], perm[v])]

                refs = [(perm[i], perm[j])] + tail(i) + tail(j)
            srcs = []
            for (x, y) in refs:
                e = ebit(x, y)
                if e is not None:
                    srcs.append(e)
            imgs.append(tuple(srcs))
        maps.append(tuple(imgs))
    return free, maps


@lru_cache(maxsize=None)
def _orbit_labels(species, n):
    """(free pairs, labels array): labels[code] = minimum code in its orbit."""
    free, maps = _linear_maps(species, n)
    k = len(free)
    N = 1 << k
    codes = np.arange(N, dtype=np.int64)
    outs = []
    for imgs in maps:
        out = np.zeros(N, dtype=np.int64)
        for ob, srcs in enumerate(imgs):
            bit = np.zeros(N, dtype=np.int64)
            for s in srcs:
                bit ^= (codes >> s) & 1
            out |= bit << ob
        outs.append(out)
    labels = codes.copy()
    changed = True
    while changed:
        changed = False
        for out in outs:
            nl = np.minimum(labels, labels[out])
            if not np.array_equal(nl, labels):
                labels = nl
                changed = True
        while True:
            nl = labels[labels]
            if np.array_equal(nl, labels):
                break
            labels = nl
            changed = True
    return tuple(free), labels


# ---------------------------------------------------------------------------
# codes <-> sign matrices
# ---------------------------------------------------------------------------


def code_to_sign_matrix(species, n, code) -> SignMatrix:
    free, fixed = _normalized_pairs(species, n)
    rows = [[0] * n for _ in range(n)]
    for (i, j) in fixed:
        rows[i][j] = rows[j][i] = 1
    for k, (i, j) in enumerate(free):
        v = -1 if (code >> k) & 1 else 1
        rows[i][j] = rows[j][i] = v
    return SignMatrix(rows)


def normalize(S: SignMatrix):
    """Switch signs so every pinned entry is +1; returns (species, code).

    Raises ValueError if the support is neither admissible shape.
    """
    n = S.n
    supp = set(S.support())
    for species in (1, 2):
        if set(support_pairs(species, n)) == supp:
            break
    else:
        raise ValueError("support is not an admissible pattern")
    sigma = [0] * n
    sigma[0] = 1
    if species == 1:
        for j in range(1, n - 1):
            sigma[j] = S.rows[0][j]
        sigma[n - 1] = 1
    elif n % 2:
        for j in range(1, n):
            sigma[j] = S.rows[0][j]
    else:
        for j in range(2, n):
            sigma[j] = S.rows[0][j]
        sigma[1] = S.rows[1][2] * sigma[2]
    free, _ = _normalized_pairs(species, n)
    code = 0
    for k, (i, j) in enumerate(free):
        if sigma[i] * sigma[j] * S.rows[i][j] < 0:
            code |= 1 << k
    return species, code


def canonicalize(S: SignMatrix) -> SignMatrix:
    """The distinguished representative of S's orbit (minimum code)."""
    species, code = normalize(S)
    _, labels = _orbit_labels(species, S.n)
    return code_to_sign_matrix(species, S.n, int(labels[code]))


# ---------------------------------------------------------------------------
# orbit database
# ---------------------------------------------------------------------------


def group_order(species, n) -> int:
    """Order of the support stabilizer inside the signed permutation group."""
    if species == 1:
        return factorial(n - 1) * 2**n
    nb = n // 2
    return factorial(nb) * 2**nb * 2**n


@dataclass(frozen=True)
class OrbitDatabase:
    species: int
    n: int
    representatives: tuple
    group_order: int

    def __len__(self):
        return len(self.representatives)

    def dump(self, path):
        with open(path, "w") as fh:
            fh.write(
                json.dumps(
                    {
                        "species": self.species,
                        "n": self.n,
                        "count": len(self.representatives),
                        "group_order": self.group_order,
                    }
                )
                + "\n"
            )
            for rep in self.representatives:
                fh.write(rep.to_json() + "\n")

    @classmethod
    def load(cls, path) -> "OrbitDatabase":
        with open(path) as fh:
            header = json.loads(fh.readline())
            reps = tuple(SignMatrix.from_json(line) for line in fh if line.strip())
        if len(reps) != header["count"]:
            raise ValueError("representative count mismatch")
        return cls(header["species"], header["n"], reps, header["group_order"])


def enumerate_reps(species, d) -> OrbitDatabase:
    """All orbit representatives for n = d + 2 lines."""
    allowed = SPECIES1_DIMS if species == 1 else SPECIES2_DIMS
    if d not in allowed:
        raise ValueError(f"species {species} supports d in {allowed}")
    n = d + 2
    _, labels = _orbit_labels(species, n)
    reps = tuple(
        code_to_sign_matrix(species, n, int(c)) for c in np.unique(labels)
    )
    return OrbitDatabase(species, n, reps, group_order(species, n))


# ---------------------------------------------------------------------------
# edge actions and Burnside counting
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class EdgeAction:
    """The action of a signed permutation on the entries over a support set."""

    source: SignedPerm
    edge_map: tuple  # edge index -> (image edge index, sign)
    cycles: tuple  # tuple of (edge index tuple, sign parity)
    k: int
    has_odd_cycle: bool


def induced_edge_action(P: SignedPerm, E) -> EdgeAction:
    E = [tuple(sorted(e)) for e in E]
    eidx = {e: k for k, e in enumerate(E)}
    inv = P.inverse()
    edge_map = []
    for (i, j) in E:
        # entry at (i, j) of PXP^T comes from position (perm[i], perm[j])
        x, y = P.perm[i], P.perm[j]
        key = (x, y) if x < y else (y, x)
        if key not in eidx:
            raise ValueError("permutation does not preserve the support")
        edge_map.append((eidx[key], P.signs[i] * P.signs[j]))
    seen = [False] * len(E)
    cycles = []
    has_odd = False
    for start in range(len(E)):
        if seen[start]:
            continue
        cyc = []
        par = 1
        e = start
        while not seen[e]:
            seen[e] = True
            cyc.append(e)
            nxt, s = edge_map[e]
            par *= s
            e = nxt
        odd = par < 0
        has_odd = has_odd or odd
        cycles.append((tuple(cyc), -1 if odd else 1))
    return EdgeAction(
        P, tuple(edge_map), tuple(cycles), len(cycles), has_odd
    )


def _species2_perms(n):
    """Vertex permutations generating F2 mod sign flips (all of them)."""
    blks = matching_blocks(n)
    nb = len(blks)
    for bp in permutations(range(nb)):
        for swaps in product((0, 1), repeat=nb):
            perm = list(range(n))
            for k, (a, b) in enumerate(blks):
                c, d = blks[bp[k]]
                if swaps[k]:
                    c, d = d, c
                perm[a], perm[b] = c, d
            yield tuple(perm)


def burnside_count_R2(n) -> int:
    """|R2| = average over F2 of the number of fixed sign assignments.

    A group element fixes 2^{k} assignments (k = number of edge cycles) when
    every cycle has even sign parity, else none.  For a fixed vertex
    permutation the cycle parities are linear in the sign-flip vector, so
    the sum over all 2^n sign flips is 2^k * 2^{n - rank} with rank taken
    over F2 of the cycle-incidence parities.
    """
    if n < 4:
        raise ValueError("need n >= 4")
    sup = support_pairs(2, n)
    eidx = {e: k for k, e in enumerate(sup)}
    nperm = 0
    total = 0
    for perm in _species2_perms(n):
        nperm += 1
        seen = [False] * len(sup)
        parities = []
        k = 0
        for start in range(len(sup)):
            if seen[start]:
                continue
            k += 1
            mask = 0
            e = start
            while not seen[e]:
                seen[e] = True
                i, j = sup[e]
                x, y = perm[i], perm[j]
                mask ^= (1 << x) ^ (1 << y)
                e = eidx[(x, y) if x < y else (y, x)]
            if mask:
                parities.append(mask)
        # rank over F2 of the parity masks (leading-bit echelon form)
        rank = 0
        lead = {}
        for m in parities:
            while m:
                lb = m.bit_length() - 1
                if lb in lead:
                    m ^= lead[lb]
                else:
                    lead[lb] = m
                    rank += 1
                    break
        total += (1 << k) * (1 << (n - rank))
    return total // (nperm * (1 << n))
