# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled interval evaluation of sparse polynomials over float boxes.

Every multiply and add is followed by an outward nextafter, so the returned
enclosure always contains the true range of the polynomial over the box
regardless of rounding in the intermediate operations.  Variable powers are
enclosed directly from the interval endpoints, so even powers of
sign-straddling intervals stay nonnegative.
"""

from libc.math cimport nextafter, INFINITY


cdef inline void point_pow(double x, long e, double* rlo, double* rhi) nogil:
    cdef double lo = x
    cdef double hi = x
    cdef double p, q
    cdef long k
    for k in range(e - 1):
        p = lo * x
        q = hi * x
        if p <= q:
            lo = nextafter(p, -INFINITY)
            hi = nextafter(q, INFINITY)
        else:
            lo = nextafter(q, -INFINITY)
            hi = nextafter(p, INFINITY)
    rlo[0] = lo
    rhi[0] = hi


cdef inline void power_range(double blo, double bhi, long e,
                             double* rlo, double* rhi) nogil:
    cdef double l1, h1, l2, h2, m
    if e % 2 == 0 and blo < 0.0 and bhi > 0.0:
        m = -blo if -blo > bhi else bhi
        point_pow(m, e, &l1, &h1)
        rlo[0] = 0.0
        rhi[0] = h1
        return
    point_pow(blo, e, &l1, &h1)
    point_pow(bhi, e, &l2, &h2)
    rlo[0] = l1 if l1 < l2 else l2
    rhi[0] = h1 if h1 > h2 else h2


cdef inline void imul(double alo, double ahi, double blo, double bhi,
                      double* rlo, double* rhi) nogil:
    cdef double p1 = alo * blo
    cdef double p2 = alo * bhi
    cdef double p3 = ahi * blo
    cdef double p4 = ahi * bhi
    cdef double lo = p1
    cdef double hi = p1
    if p2 < lo: lo = p2
    if p3 < lo: lo = p3
    if p4 < lo: lo = p4
    if p2 > hi: hi = p2
    if p3 > hi: hi = p3
    if p4 > hi: hi = p4
    rlo[0] = nextafter(lo, -INFINITY)
    rhi[0] = nextafter(hi, INFINITY)


def eval_box(double[::1] clo, double[::1] chi, long[:, ::1] exps,
             double[::1] blo, double[::1] bhi):
    """Outward-rounded enclosure of sum_t c_t * prod_v x_v^e_{tv} over the box.

    clo/chi bracket each coefficient, exps is the (nterms, nvars) exponent
    table, blo/bhi the box.  Returns (lo, hi).
    """
    cdef Py_ssize_t nterms = clo.shape[0]
    cdef Py_ssize_t nvars = blo.shape[0]
    cdef double slo = 0.0
    cdef double shi = 0.0
    cdef double tlo, thi, plo, phi
    cdef Py_ssize_t t, v
    cdef long e
    for t in range(nterms):
        tlo = clo[t]
        thi = chi[t]
        for v in range(nvars):
            e = exps[t, v]
            if e == 0:
                continue
            power_range(blo[v], bhi[v], e, &plo, &phi)
            imul(tlo, thi, plo, phi, &tlo, &thi)
        slo = nextafter(slo + tlo, -INFINITY)
        shi = nextafter(shi + thi, INFINITY)
    return slo, shi
