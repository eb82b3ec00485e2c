"""Sparse multivariate polynomials over Q.

Terms are stored as a map from exponent vectors (tuples, one slot per
variable) to nonzero rational coefficients.  The constraint systems this
package manipulates are sparse in at most five variables, so no effort is
spent on asymptotically fancy multiplication.

Canonical text form: terms joined by " + ", each term "c * x^e * y^f" with c
an exact rational ("p/q"), exponent-1 factors written without "^", and the
constant term written as a bare rational.
"""

from __future__ import annotations

import re
from typing import Iterable, Mapping

from gmpy2 import mpq

from .qq import qq, qq_to_str


class Polynomial:
    """Immutable sparse polynomial over Q in a fixed ordered variable list."""

    __slots__ = ("variables", "terms", "_hash")

    def __init__(self, variables: Iterable[str], terms: Mapping[tuple, object]):
        variables = tuple(variables)
        clean = {}
        nv = len(variables)
        for exps, c in terms.items():
            c = qq(c)
            if c == 0:
                continue
            exps = tuple(int(e) for e in exps)
            if len(exps) != nv:
                raise ValueError("exponent vector length mismatch")
            clean[exps] = clean.get(exps, mpq(0)) + c
            if clean[exps] == 0:
                del clean[exps]
        object.__setattr__(self, "variables", variables)
        object.__setattr__(self, "terms", clean)
        object.__setattr__(self, "_hash", None)

    def __setattr__(self, *a):
        raise AttributeError("Polynomial is immutable")

    # -- constructors ------------------------------------------------------

    @classmethod
    def constant(cls, c, variables=()) -> "Polynomial":
        variables = tuple(variables)
        return cls(variables, {(0,) * len(variables): qq(c)})

    @classmethod
    def variable(cls, name: str, variables) -> "Polynomial":
        variables = tuple(variables)
        i = variables.index(name)
        exps = tuple(1 if j == i else 0 for j in range(len(variables)))
        return cls(variables, {exps: 1})

    @classmethod
    def univariate(cls, name: str, coeffs) -> "Polynomial":
        """coeffs[k] is the coefficient of name**k."""
        return cls((name,), {(k,): c for k, c in enumerate(coeffs)})

    # -- basic queries -----------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def total_degree(self) -> int:
        if not self.terms:
            return 0
        return max(sum(e) for e in self.terms)

    def degree_in(self, name: str) -> int:
        if not self.terms:
            return 0
        i = self.variables.index(name)
        return max(e[i] for e in self.terms)

    def constant_value(self) -> mpq:
        zero = (0,) * len(self.variables)
        return self.terms.get(zero, mpq(0))

    def max_abs_coeff(self) -> mpq:
        if not self.terms:
            return mpq(0)
        return max(abs(c) for c in self.terms.values())

    def coefficients_univariate(self):
        """Dense coefficient list [c0, c1, ...] for a univariate polynomial."""
        if len(self.variables) != 1:
            raise ValueError("not univariate")
        d = self.total_degree()
        out = [mpq(0)] * (d + 1)
        for (e,), c in self.terms.items():
            out[e] = c
        return out

    # -- variable alignment ------------------------------------------------

    def with_variables(self, variables) -> "Polynomial":
        """Reinterpret over a superset (or reordering) of the variables."""
        variables = tuple(variables)
        pos = []
        for v in self.variables:
            if v not in variables:
                raise ValueError(f"variable {v} missing from target list")
            pos.append(variables.index(v))
        nv = len(variables)
        terms = {}
        for exps, c in self.terms.items():
            new = [0] * nv
            for p, e in zip(pos, exps):
                new[p] = e
            terms[tuple(new)] = c
        return Polynomial(variables, terms)

    @staticmethod
    def _aligned(a: "Polynomial", b: "Polynomial"):
        if a.variables == b.variables:
            return a, b
        merged = list(a.variables) + [v for v in b.variables if v not in a.variables]
        return a.with_variables(merged), b.with_variables(merged)

    # -- arithmetic --------------------------------------------------------

    def __add__(self, other):
        if not isinstance(other, Polynomial):
            other = Polynomial.constant(other, self.variables)
        a, b = self._aligned(self, other)
        terms = dict(a.terms)
        for exps, c in b.terms.items():
            terms[exps] = terms.get(exps, mpq(0)) + c
        return Polynomial(a.variables, terms)

    __radd__ = __add__

    def __neg__(self):
        return Polynomial(self.variables, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other if isinstance(other, Polynomial) else -qq(other))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, Polynomial):
            c = qq(other)
            return Polynomial(self.variables, {e: k * c for e, k in self.terms.items()})
        a, b = self._aligned(self, other)
        terms = {}
        for ea, ca in a.terms.items():
            for eb, cb in b.terms.items():
                e = tuple(x + y for x, y in zip(ea, eb))
                terms[e] = terms.get(e, mpq(0)) + ca * cb
        return Polynomial(a.variables, terms)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative power")
        out = Polynomial.constant(1, self.variables)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base if n > 1 else base
            n >>= 1
        return out

    def __eq__(self, other):
        if not isinstance(other, Polynomial):
            return NotImplemented
        a, b = self._aligned(self, other)
        return a.terms == b.terms

    def __hash__(self):
        if self._hash is None:
            h = hash((self.variables, frozenset(self.terms.items())))
            object.__setattr__(self, "_hash", h)
        return self._hash

    # -- evaluation --------------------------------------------------------

    def eval(self, values: Mapping[str, object]):
        """Evaluate with values from any commutative ring (mpq, field elements,
        intervals).  Missing variables raise KeyError."""
        vals = [values[v] for v in self.variables]
        total = None
        for exps, c in self.terms.items():
            term = c
            for v, e in zip(vals, exps):
                for _ in range(e):
                    term = term * v
            total = term if total is None else total + term
        return mpq(0) if total is None else total

    def derivative(self, name: str) -> "Polynomial":
        i = self.variables.index(name)
        terms = {}
        for exps, c in self.terms.items():
            if exps[i] == 0:
                continue
            new = list(exps)
            new[i] -= 1
            terms[tuple(new)] = c * exps[i]
        return Polynomial(self.variables, terms)

    def subs(self, name: str, value) -> "Polynomial":
        """Substitute a rational value for one variable."""
        i = self.variables.index(name)
        value = qq(value)
        rest = self.variables[:i] + self.variables[i + 1:]
        terms = {}
        for exps, c in self.terms.items():
            e = exps[:i] + exps[i + 1:]
            coeff = c * value ** exps[i]
            terms[e] = terms.get(e, mpq(0)) + coeff
        return Polynomial(rest, terms)

    # -- text form ---------------------------------------------------------

    def __repr__(self):
        return f"Polynomial({self.to_str()!r})"

    def to_str(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for exps in sorted(self.terms, key=lambda e: (sum(e), e), reverse=True):
            c = self.terms[exps]
            factors = []
            for v, e in zip(self.variables, exps):
                if e == 1:
                    factors.append(v)
                elif e > 1:
                    factors.append(f"{v}^{e}")
            if factors:
                parts.append(" * ".join([qq_to_str(c)] + factors))
            else:
                parts.append(qq_to_str(c))
        return " + ".join(parts)

    @classmethod
    def from_str(cls, text: str, variables) -> "Polynomial":
        """Parse the canonical text form (also accepts '-' between terms)."""
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
            coeff = mpq(1)
            exps = [0] * len(variables)
            for factor in chunk.split("*"):
                factor = factor.strip()
                if not factor:
                    continue
                m = re.fullmatch(r"([A-Za-z_][A-Za-z_0-9]*)(?:\^(\d+))?", factor)
                if m:
                    name, e = m.group(1), int(m.group(2) or 1)
                    exps[variables.index(name)] += e
                elif factor.startswith("-") and re.fullmatch(
                    r"-([A-Za-z_][A-Za-z_0-9]*)(?:\^(\d+))?", factor
                ):
                    m = re.fullmatch(r"-([A-Za-z_][A-Za-z_0-9]*)(?:\^(\d+))?", factor)
                    coeff = -coeff
                    exps[variables.index(m.group(1))] += int(m.group(2) or 1)
                else:
                    coeff *= qq(factor)
            key = tuple(exps)
            terms[key] = terms.get(key, mpq(0)) + coeff
        return cls(variables, terms)
