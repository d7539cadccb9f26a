# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled RK4 kernels for the two-population replicator system.

Arithmetic is written in the same order as ``_kernels_py`` so both
backends produce identical doubles.
"""
import numpy as np
cimport numpy as cnp
from libc.math cimport isfinite

cnp.import_array()

DEF OK = 0
DEF HIT = 1
DEF BAD = 2
DEF LOW = 3
DEF HIGH = 4


cdef inline void _rhs(double p, double q, double u, double v, double* fp, double* fq) noexcept nogil:
    fp[0] = p * (1.0 - p) * (u * q - 1.0)
    fq[0] = q * (1.0 - q) * (v * p - 1.0)


cdef inline int _step(double* p, double* q, double u, double v, double h, double h6) noexcept nogil:
    cdef double a1, b1, a2, b2, a3, b3, a4, b4, pn, qn
    _rhs(p[0], q[0], u, v, &a1, &b1)
    _rhs(p[0] + 0.5 * h * a1, q[0] + 0.5 * h * b1, u, v, &a2, &b2)
    _rhs(p[0] + 0.5 * h * a2, q[0] + 0.5 * h * b2, u, v, &a3, &b3)
    _rhs(p[0] + h * a3, q[0] + h * b3, u, v, &a4, &b4)
    pn = p[0] + h6 * (a1 + 2.0 * a2 + 2.0 * a3 + a4)
    qn = q[0] + h6 * (b1 + 2.0 * b2 + 2.0 * b3 + b4)
    if not (isfinite(pn) and isfinite(qn)):
        p[0] = pn
        q[0] = qn
        return BAD
    if pn < 0.0:
        pn = 0.0
    elif pn > 1.0:
        pn = 1.0
    if qn < 0.0:
        qn = 0.0
    elif qn > 1.0:
        qn = 1.0
    p[0] = pn
    q[0] = qn
    return OK


cdef inline int _where(double p, double q, double sp, double sq, double r2) noexcept nogil:
    cdef double dp = p - sp, dq = q - sq
    if dp * dp + dq * dq <= r2:
        return HIT
    if p * p + q * q <= r2:
        return LOW
    dp = p - 1.0
    dq = q - 1.0
    if dp * dp + dq * dq <= r2:
        return HIGH
    return OK


def rk4_final(double[::1] p0, double[::1] q0, double u, double v, double h, long n_steps,
              double sp, double sq, double radius):
    """Integrate many starts up to ``n_steps``.

    A start is frozen with status 1 on entering the ``radius`` ball around
    ``(sp, sq)``, 3 or 4 on entering the ball around (0, 0) or (1, 1), and 2
    when the state stops being finite.
    """
    cdef Py_ssize_t n = p0.shape[0], c
    cdef long s
    cdef double p, q, r2 = radius * radius, h6 = h / 6.0
    cdef int st
    pf = np.empty(n, dtype=np.float64)
    qf = np.empty(n, dtype=np.float64)
    status = np.zeros(n, dtype=np.int8)
    cdef double[::1] pv = pf
    cdef double[::1] qv = qf
    cdef cnp.int8_t[::1] sv = status
    with nogil:
        for c in range(n):
            p = p0[c]
            q = q0[c]
            st = _where(p, q, sp, sq, r2)
            s = 0
            while st == OK and s < n_steps:
                st = _step(&p, &q, u, v, h, h6)
                if st == OK:
                    st = _where(p, q, sp, sq, r2)
                s += 1
            pv[c] = p
            qv[c] = q
            sv[c] = st
    return pf, qf, status


def rk4_path(double p0, double q0, double u, double v, double h, long n_steps):
    """Full trajectory; returns ``(p, q, bad_step)`` with ``bad_step == -1`` when finite."""
    ps = np.empty(n_steps + 1, dtype=np.float64)
    qs = np.empty(n_steps + 1, dtype=np.float64)
    cdef double[::1] pv = ps
    cdef double[::1] qv = qs
    cdef double p = p0, q = q0, h6 = h / 6.0
    cdef long s, bad = -1
    pv[0] = p
    qv[0] = q
    with nogil:
        for s in range(n_steps):
            if _step(&p, &q, u, v, h, h6) != OK:
                bad = s + 1
                break
            pv[s + 1] = p
            qv[s + 1] = q
    if bad >= 0:
        return ps[:bad], qs[:bad], bad
    return ps, qs, -1
