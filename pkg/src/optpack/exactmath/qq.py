"""Rational number helpers on top of gmpy2.

All exact arithmetic in the package uses gmpy2.mpq / gmpy2.mpz.  The helpers
here cover parsing ("p/q" and exact decimal strings), serialization, and the
two rounding rules the pipeline needs: round-half-up to a fixed number of
decimals (certificate rounding) and ceiling to the next multiple of 10^-4
(coherence display).
"""

from __future__ import annotations

from gmpy2 import mpq, mpz

QQ = mpq


def qq(x) -> mpq:
    """Coerce ints, strings ("3/7", "0.2410"), and floats to an exact mpq."""
    if isinstance(x, mpq):
        return x
    if isinstance(x, str):
        s = x.strip()
        if "/" in s:
            num, den = s.split("/")
            return mpq(mpz(num.strip()), mpz(den.strip()))
        if "." in s or "e" in s or "E" in s:
            return decimal_to_qq(s)
        return mpq(mpz(s))
    if isinstance(x, float):
        # floats are dyadic rationals; the conversion is exact
        return mpq(x)
    return mpq(x)


def decimal_to_qq(s: str) -> mpq:
    """Exact value of a decimal literal like '-3.00001' or '1.2e-3'."""
    s = s.strip()
    exp = 0
    for marker in ("e", "E"):
        if marker in s:
            s, e = s.split(marker)
            exp = int(e)
            break
    if "." in s:
        intpart, frac = s.split(".")
    else:
        intpart, frac = s, ""
    sign = -1 if intpart.startswith("-") else 1
    intpart = intpart.lstrip("+-")
    digits = (intpart or "0") + frac
    val = mpq(mpz(digits), mpz(10) ** len(frac))
    if exp >= 0:
        val *= mpz(10) ** exp
    else:
        val /= mpz(10) ** (-exp)
    return sign * val


def qq_to_str(x: mpq) -> str:
    """Canonical 'p/q' (or 'p' when q == 1)."""
    x = mpq(x)
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


def round_to_decimals(x: mpq, places: int) -> mpq:
    """Nearest multiple of 10^-places, ties away from zero."""
    scale = mpz(10) ** places
    y = mpq(x) * scale
    n, d = y.numerator, y.denominator
    if n >= 0:
        q = (2 * n + d) // (2 * d)
    else:
        q = -((-2 * n + d) // (2 * d))
    return mpq(q, scale)


def ceil_to_decimals(x: mpq, places: int) -> mpq:
    """Smallest multiple of 10^-places that is >= x."""
    scale = mpz(10) ** places
    y = mpq(x) * scale
    n, d = y.numerator, y.denominator
    q = -((-n) // d)
    return mpq(q, scale)


def sign(x) -> int:
    if x > 0:
        return 1
    if x < 0:
        return -1
    return 0
