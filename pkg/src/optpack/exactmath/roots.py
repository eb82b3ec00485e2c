"""Real algebraic numbers via Sturm-sequence root isolation.

An AlgebraicNumber is an irreducible primitive integer polynomial together
with a rational interval that isolates exactly one of its real roots.  All
comparisons are exact: intervals are refined by bisection, and equality is
decided through the minimal polynomial, never through interval overlap.

Irreducible factorization over Q is delegated to sympy; everything else
(Sturm chains, isolation, interval refinement, the -1/x and -x transforms)
is implemented here on gmpy2 rationals.
"""

from __future__ import annotations

import math
from functools import lru_cache

from gmpy2 import mpq, mpz

from .qq import qq, sign

# ---------------------------------------------------------------------------
# dense univariate helpers (coeffs[k] = coefficient of x^k)
# ---------------------------------------------------------------------------


def _strip(coeffs):
    coeffs = list(coeffs)
    while coeffs and coeffs[-1] == 0:
        coeffs.pop()
    return coeffs


def poly_degree(coeffs) -> int:
    return len(_strip(coeffs)) - 1


def poly_eval(coeffs, x):
    x = qq(x)
    acc = mpq(0)
    for c in reversed(coeffs):
        acc = acc * x + c
    return acc


def poly_derivative(coeffs):
    return [c * k for k, c in enumerate(coeffs)][1:]


def poly_divmod(a, b):
    a = _strip([qq(c) for c in a])
    b = _strip([qq(c) for c in b])
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    q = [mpq(0)] * max(0, len(a) - len(b) + 1)
    r = list(a)
    inv_lead = 1 / b[-1]
    while len(r) >= len(b):
        k = len(r) - len(b)
        f = r[-1] * inv_lead
        q[k] = f
        for i, bc in enumerate(b):
            r[k + i] -= f * bc
        r.pop()
        while r and r[-1] == 0:
            r.pop()
    return _strip(q), r


def poly_gcd(a, b):
    a, b = _strip(a), _strip(b)
    while b:
        _, r = poly_divmod(a, b)
        a, b = b, r
    if a:
        lead = a[-1]
        a = [c / lead for c in a]
    return a


def poly_squarefree(coeffs):
    coeffs = _strip(coeffs)
    if len(coeffs) <= 1:
        return coeffs
    g = poly_gcd(coeffs, poly_derivative(coeffs))
    if len(g) == 1:
        return coeffs
    q, r = poly_divmod(coeffs, g)
    assert not r
    return q


def primitive_int_coeffs(coeffs):
    """Scale rational coeffs to coprime integers with positive leading term."""
    coeffs = _strip([qq(c) for c in coeffs])
    if not coeffs:
        return ()
    den = mpz(1)
    for c in coeffs:
        den = den * c.denominator // math.gcd(den, c.denominator)
    ints = [mpz(c * den) for c in coeffs]
    g = mpz(0)
    for c in ints:
        g = math.gcd(g, c)
    ints = [c // g for c in ints]
    if ints[-1] < 0:
        ints = [-c for c in ints]
    return tuple(ints)


def sturm_chain(coeffs):
    chain = [_strip([qq(c) for c in coeffs])]
    d = poly_derivative(chain[0])
    if _strip(d):
        chain.append(_strip(d))
        while True:
            _, r = poly_divmod(chain[-2], chain[-1])
            if not r:
                break
            chain.append([-c for c in r])
    return chain


def _sign_changes(values) -> int:
    out, prev = 0, 0
    for v in values:
        s = sign(v)
        if s == 0:
            continue
        if prev != 0 and s != prev:
            out += 1
        prev = s
    return out


def sturm_count(chain, lo, hi) -> int:
    """Number of distinct real roots in (lo, hi]."""
    va = _sign_changes([poly_eval(p, lo) for p in chain])
    vb = _sign_changes([poly_eval(p, hi) for p in chain])
    return va - vb


def root_bound(coeffs) -> mpq:
    """Cauchy bound: all real roots lie in (-B, B)."""
    coeffs = _strip(coeffs)
    lead = abs(coeffs[-1])
    b = max((abs(c) / lead for c in coeffs[:-1]), default=mpq(0))
    return b + 1


def factor_rational(coeffs):
    """Irreducible factorization over Q via sympy.

    Returns a list of (primitive integer coeff tuple, multiplicity), sorted
    deterministically.
    """
    ints = primitive_int_coeffs(coeffs)
    if not ints:
        raise ValueError("zero polynomial")
    return _factor_cached(ints)


@lru_cache(maxsize=4096)
def _factor_cached(ints):
    import sympy

    x = sympy.Symbol("x")
    expr = sum(int(c) * x**k for k, c in enumerate(ints))
    _, factors = sympy.factor_list(sympy.Poly(expr, x))
    out = []
    for f, mult in factors:
        cs = [mpz(int(c)) for c in reversed(f.all_coeffs())]
        out.append((primitive_int_coeffs(cs), int(mult)))
    out.sort(key=lambda t: (len(t[0]), t[0]))
    return out


# ---------------------------------------------------------------------------
# algebraic numbers
# ---------------------------------------------------------------------------


class AlgebraicNumber:
    """A real algebraic number: irreducible minpoly + isolating interval.

    Rational numbers are the degree-1 case and carry a degenerate interval
    [v, v].  For irrational numbers the interval is open, the endpoints are
    never roots, and the Sturm count of roots inside is exactly one.
    """

    __slots__ = ("minpoly", "lo", "hi")

    def __init__(self, minpoly, lo, hi, _checked=False):
        minpoly = tuple(mpz(c) for c in minpoly)
        lo, hi = qq(lo), qq(hi)
        if not _checked:
            if len(minpoly) < 2:
                raise ValueError("constant minimal polynomial")
            if lo > hi:
                raise ValueError("empty interval")
            if len(minpoly) > 2:
                chain = sturm_chain(minpoly)
                if poly_eval(minpoly, lo) == 0 or poly_eval(minpoly, hi) == 0:
                    raise ValueError("endpoint is a root")
                if sturm_count(chain, lo, hi) != 1:
                    raise ValueError("interval does not isolate one root")
        self.minpoly = minpoly
        self.lo = lo
        self.hi = hi

    # -- constructors ------------------------------------------------------

    @classmethod
    def from_rational(cls, r) -> "AlgebraicNumber":
        r = qq(r)
        return cls((-r.numerator, r.denominator), r, r, _checked=True)

    @property
    def degree(self) -> int:
        return len(self.minpoly) - 1

    @property
    def is_rational(self) -> bool:
        return self.degree == 1

    def to_qq(self) -> mpq:
        if not self.is_rational:
            raise ValueError("not rational")
        return mpq(-self.minpoly[0], self.minpoly[1])

    # -- refinement --------------------------------------------------------

    def refined(self, max_width) -> "AlgebraicNumber":
        """A copy whose interval width is at most max_width."""
        if self.is_rational:
            return self
        lo, hi = self.lo, self.hi
        slo = sign(poly_eval(self.minpoly, lo))
        max_width = qq(max_width)
        while hi - lo > max_width:
            mid = (lo + hi) / 2
            sm = sign(poly_eval(self.minpoly, mid))
            # irreducible of degree >= 2 has no rational roots
            if sm == slo:
                lo = mid
            else:
                hi = mid
        return AlgebraicNumber(self.minpoly, lo, hi, _checked=True)

    def interval(self):
        return self.lo, self.hi

    def approx(self, digits: int = 15) -> float:
        r = self.refined(mpq(1, mpz(10) ** digits))
        return float((r.lo + r.hi) / 2)

    # -- comparisons -------------------------------------------------------

    def compare(self, other) -> int:
        """-1, 0, or +1; exact."""
        if not isinstance(other, AlgebraicNumber):
            other = AlgebraicNumber.from_rational(other)
        if self.is_rational and other.is_rational:
            return sign(self.to_qq() - other.to_qq())
        if self.minpoly == other.minpoly:
            lo, hi = max(self.lo, other.lo), min(self.hi, other.hi)
            if lo < hi:
                chain = sturm_chain(self.minpoly)
                if poly_eval(self.minpoly, lo) != 0 and poly_eval(self.minpoly, hi) != 0:
                    if sturm_count(chain, lo, hi) == 1:
                        return 0
        a, b = self, other
        while True:
            if a.hi < b.lo:
                return -1
            if b.hi < a.lo:
                return 1
            if a.is_rational and b.is_rational:
                return 0
            if not a.is_rational:
                a = a.refined((a.hi - a.lo) / 4)
            if not b.is_rational:
                b = b.refined((b.hi - b.lo) / 4)

    def __eq__(self, other):
        if not isinstance(other, (AlgebraicNumber, mpq, int)):
            return NotImplemented
        return self.compare(other) == 0

    def __lt__(self, other):
        return self.compare(other) < 0

    def __le__(self, other):
        return self.compare(other) <= 0

    def __gt__(self, other):
        return self.compare(other) > 0

    def __ge__(self, other):
        return self.compare(other) >= 0

    def __hash__(self):
        return hash(self.minpoly)

    def __repr__(self):
        return f"AlgebraicNumber(deg={self.degree}, ~{self.approx(8):.8f})"

    # -- transforms --------------------------------------------------------

    def __neg__(self) -> "AlgebraicNumber":
        if self.is_rational:
            return AlgebraicNumber.from_rational(-self.to_qq())
        p = [c if k % 2 == 0 else -c for k, c in enumerate(self.minpoly)]
        return AlgebraicNumber(primitive_int_coeffs(p), -self.hi, -self.lo)

    def inverse(self) -> "AlgebraicNumber":
        if self.is_rational:
            v = self.to_qq()
            if v == 0:
                raise ZeroDivisionError("inverse of zero")
            return AlgebraicNumber.from_rational(1 / v)
        a = self
        while a.lo <= 0 <= a.hi:
            a = a.refined((a.hi - a.lo) / 4)
        rev = tuple(reversed(a.minpoly))  # x^n p(1/x)
        lo, hi = 1 / a.hi, 1 / a.lo
        return AlgebraicNumber(primitive_int_coeffs(rev), lo, hi)

    def sign(self) -> int:
        if self.is_rational:
            return sign(self.to_qq())
        a = self
        while a.lo <= 0 <= a.hi:
            a = a.refined((a.hi - a.lo) / 4)
        return 1 if a.lo > 0 else -1


def isolate_real_roots(coeffs):
    """All real roots of a nonzero rational polynomial, increasing, with
    multiplicities.  Returns a list of (AlgebraicNumber, multiplicity).
    """
    coeffs = _strip([qq(c) for c in coeffs])
    if not coeffs:
        raise ValueError("undefined root set")
    roots = []
    for minpoly, mult in factor_rational(coeffs):
        deg = len(minpoly) - 1
        if deg == 0:
            continue
        if deg == 1:
            r = mpq(-minpoly[0], minpoly[1])
            roots.append((AlgebraicNumber.from_rational(r), mult))
            continue
        chain = sturm_chain(minpoly)
        bound = root_bound(minpoly)
        stack = [(-bound, bound)]
        found = []
        while stack:
            lo, hi = stack.pop()
            n = sturm_count(chain, lo, hi)
            if n == 0:
                continue
            if n == 1 and poly_eval(minpoly, lo) != 0 and poly_eval(minpoly, hi) != 0:
                found.append(AlgebraicNumber(minpoly, lo, hi, _checked=True))
                continue
            mid = (lo + hi) / 2
            # irreducible deg >= 2: no rational roots, mid is safe
            stack.append((lo, mid))
            stack.append((mid, hi))
        found.sort(key=lambda a: a.lo)
        roots.extend((r, mult) for r in found)
    # distinct irreducible factors have disjoint root sets; exact merge sort
    import functools

    roots.sort(key=functools.cmp_to_key(lambda x, y: x[0].compare(y[0])))
    return roots
