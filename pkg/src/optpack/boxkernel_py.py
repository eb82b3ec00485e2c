"""Pure Python twin of the compiled box-evaluation kernel.

Same contract as optpack._boxkernel.eval_box: an outward-rounded float
enclosure of a sparse polynomial over a box, sound under to-nearest rounding
because every multiply and add is widened by one ulp on each side.  Variable
powers are enclosed directly from the interval endpoints, so even powers of
sign-straddling intervals stay nonnegative.
"""

from math import inf, nextafter


def _point_pow(x, e):
    """Outward enclosure of x**e for a single float x, e >= 1."""
    lo = hi = x
    for _ in range(e - 1):
        p = lo * x
        q = hi * x
        lo = nextafter(min(p, q), -inf)
        hi = nextafter(max(p, q), inf)
    return lo, hi


def _power_range(blo, bhi, e):
    """Outward enclosure of {x**e : blo <= x <= bhi}."""
    if e % 2 == 0 and blo < 0.0 < bhi:
        m = max(-blo, bhi)
        _, hi = _point_pow(m, e)
        return 0.0, hi
    l1, h1 = _point_pow(blo, e)
    l2, h2 = _point_pow(bhi, e)
    return min(l1, l2), max(h1, h2)


def eval_box(clo, chi, exps, blo, bhi):
    nterms = len(clo)
    nvars = len(blo)
    slo = 0.0
    shi = 0.0
    for t in range(nterms):
        tlo = clo[t]
        thi = chi[t]
        row = exps[t]
        for v in range(nvars):
            e = row[v]
            if e == 0:
                continue
            plo, phi = _power_range(blo[v], bhi[v], e)
            p1 = tlo * plo
            p2 = tlo * phi
            p3 = thi * plo
            p4 = thi * phi
            tlo = nextafter(min(p1, p2, p3, p4), -inf)
            thi = nextafter(max(p1, p2, p3, p4), inf)
        slo = nextafter(slo + tlo, -inf)
        shi = nextafter(shi + thi, inf)
    return slo, shi
