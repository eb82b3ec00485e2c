"""Rational interval arithmetic.

Endpoints are exact rationals, so "outward rounding" is a no-op: every
operation returns the exact hull of the pointwise results.  This is the
reference evaluator behind the box-elimination prover and the sign
refinement used for algebraic numbers.
"""

from __future__ import annotations

from gmpy2 import mpq

from .qq import qq


class RationalInterval:
    __slots__ = ("lo", "hi")

    def __init__(self, lo, hi=None):
        lo = qq(lo)
        hi = lo if hi is None else qq(hi)
        if lo > hi:
            raise ValueError("empty interval")
        self.lo = lo
        self.hi = hi

    def __repr__(self):
        return f"[{self.lo}, {self.hi}]"

    def __eq__(self, other):
        return (
            isinstance(other, RationalInterval)
            and self.lo == other.lo
            and self.hi == other.hi
        )

    def __hash__(self):
        return hash((self.lo, self.hi))

    @property
    def width(self) -> mpq:
        return self.hi - self.lo

    def contains(self, x) -> bool:
        x = qq(x)
        return self.lo <= x <= self.hi

    def contains_zero(self) -> bool:
        return self.lo <= 0 <= self.hi

    def strictly_positive(self) -> bool:
        return self.lo > 0

    def strictly_negative(self) -> bool:
        return self.hi < 0

    # -- arithmetic (exact hulls) -------------------------------------------

    @staticmethod
    def _coerce(x) -> "RationalInterval":
        if isinstance(x, RationalInterval):
            return x
        return RationalInterval(qq(x))

    def __add__(self, other):
        o = self._coerce(other)
        return RationalInterval(self.lo + o.lo, self.hi + o.hi)

    __radd__ = __add__

    def __neg__(self):
        return RationalInterval(-self.hi, -self.lo)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._coerce(other)
        products = (
            self.lo * o.lo,
            self.lo * o.hi,
            self.hi * o.lo,
            self.hi * o.hi,
        )
        return RationalInterval(min(products), max(products))

    __rmul__ = __mul__

    def power(self, n: int) -> "RationalInterval":
        if n == 0:
            return RationalInterval(1)
        if n == 1:
            return self
        if n % 2 == 1 or self.lo >= 0:
            return RationalInterval(self.lo**n, self.hi**n)
        if self.hi <= 0:
            return RationalInterval(self.hi**n, self.lo**n)
        return RationalInterval(0, max(self.lo**n, self.hi**n))

    def intersect(self, other) -> "RationalInterval | None":
        o = self._coerce(other)
        lo, hi = max(self.lo, o.lo), min(self.hi, o.hi)
        if lo > hi:
            return None
        return RationalInterval(lo, hi)

    def hull(self, other) -> "RationalInterval":
        o = self._coerce(other)
        return RationalInterval(min(self.lo, o.lo), max(self.hi, o.hi))


def interval_eval(poly, box) -> RationalInterval:
    """Enclosure of poly over a per-variable box {name: RationalInterval}.

    Uses precomputed power tables; the result contains {p(x) : x in box}.
    """
    powers = {}
    for name in poly.variables:
        iv = box[name]
        deg = poly.degree_in(name)
        powers[name] = [iv.power(k) for k in range(deg + 1)]
    total = RationalInterval(0)
    for exps, c in poly.terms.items():
        term = RationalInterval(c)
        for name, e in zip(poly.variables, exps):
            if e:
                term = term * powers[name][e]
        total = total + term
    return total
