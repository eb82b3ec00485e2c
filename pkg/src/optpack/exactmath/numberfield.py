"""Arithmetic in Q(alpha) for a real algebraic alpha.

Elements are polynomials in alpha of degree < deg(minpoly), stored as dense
rational coefficient vectors.  Multiplication reduces modulo the minimal
polynomial; inverses come from the extended Euclidean algorithm.  Sign
determination refines alpha's isolating interval until the element's
enclosure excludes zero, with the exact zero test (the reduced representative
is the zero vector) applied first so refinement always terminates.
"""

from __future__ import annotations

from gmpy2 import mpq

from .interval import RationalInterval
from .qq import qq, sign
from .roots import (
    AlgebraicNumber,
    factor_rational,
    poly_divmod,
    sturm_chain,
    sturm_count,
    poly_eval,
)


class NumberField:
    """Q(alpha).  Degree 1 degenerates to plain Q, which keeps callers
    uniform when a Gram matrix happens to have rational entries."""

    def __init__(self, alpha: AlgebraicNumber):
        self.alpha = alpha
        self.degree = alpha.degree
        lead = mpq(alpha.minpoly[-1])
        self.minpoly_monic = [qq(c) / lead for c in alpha.minpoly]
        # reduction table for alpha^k, k = degree .. 2*degree - 2
        self._red = []
        if self.degree > 1:
            cur = [-c for c in self.minpoly_monic[:-1]]  # alpha^degree
            self._red.append(list(cur))
            for _ in range(self.degree - 2):
                cur = [mpq(0)] + cur
                top = cur.pop()
                if top != 0:
                    for i in range(self.degree):
                        cur[i] += top * self._red[0][i]
                self._red.append(list(cur))
        self._alpha_box = alpha  # refined lazily

    # -- element constructors ------------------------------------------------

    def element(self, coeffs) -> "FieldElement":
        coeffs = [qq(c) for c in coeffs]
        if len(coeffs) > self.degree:
            raise ValueError("coefficient vector too long")
        coeffs += [mpq(0)] * (self.degree - len(coeffs))
        return FieldElement(self, tuple(coeffs))

    def zero(self) -> "FieldElement":
        return self.element([])

    def one(self) -> "FieldElement":
        return self.element([1])

    def gen(self) -> "FieldElement":
        if self.degree == 1:
            return self.element([self.alpha.to_qq()])
        return self.element([0, 1])

    def from_rational(self, r) -> "FieldElement":
        return self.element([qq(r)])

    def coerce(self, x) -> "FieldElement":
        if isinstance(x, FieldElement):
            if x.field is not self and x.field.alpha.minpoly != self.alpha.minpoly:
                raise ValueError("element from a different field")
            return FieldElement(self, x.coeffs)
        return self.from_rational(x)

    def __eq__(self, other):
        return (
            isinstance(other, NumberField)
            and self.alpha.minpoly == other.alpha.minpoly
            and self.alpha.compare(other.alpha) == 0
        )

    def __hash__(self):
        return hash(self.alpha.minpoly)

    def __repr__(self):
        return f"NumberField(alpha~{self.alpha.approx(6):.6f}, deg={self.degree})"

    # -- internals ------------------------------------------------------------

    def _reduce(self, coeffs):
        """Reduce a product vector (length <= 2*degree - 1) mod the minpoly."""
        n = self.degree
        out = list(coeffs[:n]) + [mpq(0)] * max(0, n - len(coeffs))
        for k in range(n, len(coeffs)):
            c = coeffs[k]
            if c != 0:
                red = self._red[k - n]
                for i in range(n):
                    out[i] += c * red[i]
        return out

    def _refine_alpha(self):
        self._alpha_box = self._alpha_box.refined(
            (self._alpha_box.hi - self._alpha_box.lo) / 4
        )

    def element_sign(self, elem: "FieldElement") -> int:
        if all(c == 0 for c in elem.coeffs):
            return 0
        if self.degree == 1:
            return sign(elem.coeffs[0])
        while True:
            box = RationalInterval(self._alpha_box.lo, self._alpha_box.hi)
            enc = RationalInterval(elem.coeffs[-1])
            for c in reversed(elem.coeffs[:-1]):
                enc = enc * box + c
            if enc.strictly_positive():
                return 1
            if enc.strictly_negative():
                return -1
            self._refine_alpha()

    def element_interval(self, elem: "FieldElement", max_width) -> RationalInterval:
        """A rational enclosure of the element, at most max_width wide."""
        max_width = qq(max_width)
        while True:
            box = RationalInterval(self._alpha_box.lo, self._alpha_box.hi)
            enc = RationalInterval(elem.coeffs[-1])
            for c in reversed(elem.coeffs[:-1]):
                enc = enc * box + c
            if enc.width <= max_width:
                return enc
            self._refine_alpha()

    def element_to_algebraic(self, elem: "FieldElement") -> AlgebraicNumber:
        """Minimal polynomial + isolating interval of the element itself."""
        if self.degree == 1 or all(c == 0 for c in elem.coeffs[1:]):
            return AlgebraicNumber.from_rational(elem.coeffs[0])
        from .matrix import charpoly_coeffs

        n = self.degree
        cols = []
        for j in range(n):
            basis = [mpq(0)] * n
            basis[j] = mpq(1)
            prod = _poly_mul(list(elem.coeffs), basis)
            cols.append(self._reduce(prod))
        mult = [[cols[j][i] for j in range(n)] for i in range(n)]
        chi = charpoly_coeffs(mult)
        for minpoly, _ in factor_rational(chi):
            if len(minpoly) < 2:
                continue
            # exact membership test: does this factor annihilate the element?
            acc = self.zero()
            for c in reversed(minpoly):
                acc = acc * elem + self.from_rational(c)
            if all(v == 0 for v in acc.coeffs):
                if len(minpoly) == 2:
                    return AlgebraicNumber.from_rational(
                        mpq(-minpoly[0], minpoly[1])
                    )
                chain = sturm_chain(minpoly)
                width = mpq(1, 16)
                while True:
                    enc = self.element_interval(elem, width)
                    lo, hi = enc.lo, enc.hi
                    if (
                        poly_eval(minpoly, lo) != 0
                        and poly_eval(minpoly, hi) != 0
                        and sturm_count(chain, lo, hi) == 1
                    ):
                        return AlgebraicNumber(minpoly, lo, hi, _checked=True)
                    width /= 16
        raise AssertionError("no irreducible factor annihilates the element")


def _poly_mul(a, b):
    out = [mpq(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x == 0:
            continue
        for j, y in enumerate(b):
            if y != 0:
                out[i + j] += x * y
    return out


class FieldElement:
    """Immutable element of a NumberField; supports +, -, *, /, sign."""

    __slots__ = ("field", "coeffs")

    def __init__(self, field: NumberField, coeffs: tuple):
        self.field = field
        self.coeffs = coeffs

    def _co(self, other) -> "FieldElement":
        if isinstance(other, FieldElement):
            return other
        return self.field.from_rational(other)

    def __add__(self, other):
        o = self._co(other)
        return FieldElement(
            self.field, tuple(a + b for a, b in zip(self.coeffs, o.coeffs))
        )

    __radd__ = __add__

    def __neg__(self):
        return FieldElement(self.field, tuple(-a for a in self.coeffs))

    def __sub__(self, other):
        return self + (-self._co(other))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._co(other)
        if self.field.degree == 1:
            return FieldElement(self.field, (self.coeffs[0] * o.coeffs[0],))
        prod = _poly_mul(list(self.coeffs), list(o.coeffs))
        return FieldElement(self.field, tuple(self.field._reduce(prod)))

    __rmul__ = __mul__

    def inverse(self) -> "FieldElement":
        if self.is_zero():
            raise ZeroDivisionError("division by zero field element")
        if self.field.degree == 1:
            return FieldElement(self.field, (1 / self.coeffs[0],))
        # extended Euclid: s * elem + t * minpoly = 1
        a = list(self.coeffs)
        m = list(self.field.minpoly_monic)
        r0, r1 = m, [c for c in a]
        s0, s1 = [], [mpq(1)]
        while True:
            q, r = poly_divmod(r0, r1)
            if not r:
                break
            s = _poly_sub(s0, _poly_mul_list(q, s1))
            r0, s0 = r1, s1
            r1, s1 = r, s
        # r1 is a nonzero constant (minpoly irreducible)
        c = r1[0]
        inv = [x / c for x in s1]
        return FieldElement(self.field, tuple(self.field._reduce(inv)))

    def __truediv__(self, other):
        o = self._co(other)
        return self * o.inverse()

    def __rtruediv__(self, other):
        return self._co(other) / self

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coeffs)

    def sign(self) -> int:
        return self.field.element_sign(self)

    def abs(self) -> "FieldElement":
        return self if self.sign() >= 0 else -self

    def __eq__(self, other):
        if not isinstance(other, (FieldElement, int, mpq)):
            return NotImplemented
        return (self - other).is_zero()

    def __hash__(self):
        return hash(self.coeffs)

    def __lt__(self, other):
        return (self - self._co(other)).sign() < 0

    def __le__(self, other):
        return (self - self._co(other)).sign() <= 0

    def __gt__(self, other):
        return (self - self._co(other)).sign() > 0

    def __ge__(self, other):
        return (self - self._co(other)).sign() >= 0

    def approx(self, digits: int = 12) -> float:
        enc = self.field.element_interval(self, mpq(1, 10**digits))
        return float((enc.lo + enc.hi) / 2)

    def __repr__(self):
        return f"FieldElement({list(self.coeffs)})"


def _poly_sub(a, b):
    n = max(len(a), len(b))
    out = [mpq(0)] * n
    for i, x in enumerate(a):
        out[i] += x
    for i, x in enumerate(b):
        out[i] -= x
    while out and out[-1] == 0:
        out.pop()
    return out


def _poly_mul_list(a, b):
    if not a or not b:
        return []
    return _poly_mul(a, b)
