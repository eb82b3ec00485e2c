"""Minimal sparse polynomials over Q, matching optpack's text form.

The interchange format is the canonical string emitted by optpack: terms
joined by " + ", each term "c * x^e * y" with c a rational "p/q" or an exact
decimal literal, and the constant term a bare rational.  Only the operations
the certificate search needs are implemented (parsing, add, multiply,
serialization with decimal coefficients).
"""

from __future__ import annotations

import re
from decimal import Decimal
from fractions import Fraction

_NAME = re.compile(r"([A-Za-z_][A-Za-z_0-9]*)(?:\^(\d+))?$")


def parse_coeff(text: str) -> Fraction:
    """Exact value of 'p/q', an integer, or a decimal literal."""
    s = text.strip()
    if "/" in s:
        num, den = s.split("/")
        return Fraction(int(num), int(den))
    return Fraction(Decimal(s))


class Poly:
    """Immutable sparse polynomial with Fraction coefficients."""

    __slots__ = ("variables", "terms")

    def __init__(self, variables, terms):
        self.variables = tuple(variables)
        clean = {}
        for exps, c in terms.items():
            if c:
                clean[tuple(exps)] = c
        self.terms = clean

    @classmethod
    def constant(cls, c, variables):
        variables = tuple(variables)
        return cls(variables, {(0,) * len(variables): Fraction(c)})

    @classmethod
    def variable(cls, name, variables):
        variables = tuple(variables)
        i = variables.index(name)
        e = tuple(1 if j == i else 0 for j in range(len(variables)))
        return cls(variables, {e: Fraction(1)})

    @classmethod
    def parse(cls, text: str, variables) -> "Poly":
        variables = tuple(variables)
        text = text.strip()
        if text in ("", "0"):
            return cls(variables, {})
        text = text.replace("- ", "+ -")
        terms = {}
        for chunk in text.split("+"):
            chunk = chunk.strip()
            if not chunk:
                continue
            coeff = Fraction(1)
            exps = [0] * len(variables)
            for factor in chunk.split("*"):
                factor = factor.strip()
                neg = factor.startswith("-")
                m = _NAME.match(factor[1:] if neg else factor)
                if m:
                    if neg:
                        coeff = -coeff
                    exps[variables.index(m.group(1))] += int(m.group(2) or 1)
                else:
                    coeff *= parse_coeff(factor)
            key = tuple(exps)
            terms[key] = terms.get(key, Fraction(0)) + coeff
        return cls(variables, terms)

    def __add__(self, other):
        terms = dict(self.terms)
        for e, c in other.terms.items():
            terms[e] = terms.get(e, Fraction(0)) + c
        return Poly(self.variables, terms)

    def __sub__(self, other):
        terms = dict(self.terms)
        for e, c in other.terms.items():
            terms[e] = terms.get(e, Fraction(0)) - c
        return Poly(self.variables, terms)

    def __mul__(self, other):
        if isinstance(other, Fraction):
            return Poly(self.variables,
                        {e: c * other for e, c in self.terms.items()})
        terms = {}
        for ea, ca in self.terms.items():
            for eb, cb in other.terms.items():
                key = tuple(a + b for a, b in zip(ea, eb))
                terms[key] = terms.get(key, Fraction(0)) + ca * cb
        return Poly(self.variables, terms)

    def total_degree(self) -> int:
        return max((sum(e) for e in self.terms), default=0)

    def monomial_name(self, exps) -> str:
        """The ' * '-joined variable part of a term, '' for the constant."""
        return " * ".join(
            f"{v}^{e}" if e > 1 else v
            for v, e in zip(self.variables, exps)
            if e
        )


def decimal_str(x: float, digits: int = 12) -> str:
    """Plain decimal string with the given number of significant digits."""
    d = Decimal(f"%.{digits - 1}e" % x).normalize()
    return format(d, "f")
