# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled kernels: profile evaluation, golden-section polish of the staircase
areas, and the half-plane coverage test. Mirrors latticeq._kernels_py."""

import numpy as np
from libc.math cimport sqrt, fabs, fmin, fmax

cdef double INVPHI = (sqrt(5.0) - 1.0) / 2.0
cdef double PATTERN_CAP = 1e3


cdef inline double _feval(int kind, const double[::1] a, const double[::1] b, double t) noexcept nogil:
    cdef Py_ssize_t n = a.shape[0]
    cdef Py_ssize_t i, lo, hi, mid
    cdef double acc
    if kind == 0:
        acc = 0.0
        for i in range(n - 1, -1, -1):
            acc = acc * t + a[i]
        return acc
    if t <= a[0]:
        return b[0]
    if t >= a[n - 1]:
        return b[n - 1]
    lo = 0
    hi = n - 1
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if a[mid] <= t:
            lo = mid
        else:
            hi = mid
    return b[lo] + (b[hi] - b[lo]) * (t - a[lo]) / (a[hi] - a[lo])


cdef inline double _psi(int kind, const double[::1] a, const double[::1] b, double x1, double x2) noexcept nogil:
    return x1 * _feval(kind, a, b, x1) + (x2 - x1) * _feval(kind, a, b, x2)


cdef inline double _phi(int kind, const double[::1] a, const double[::1] b, double x) noexcept nogil:
    return x + (1.0 - x) * _feval(kind, a, b, x)


# mode 0: psi along x1 (fixed x2); 1: psi along x2 (fixed x1);
# 2: psi along the line (p1 + s d1, p2 + s d2); 3: -phi
cdef inline double _g(int mode, int kind, const double[::1] a, const double[::1] b,
                      double p1, double p2, double d1, double d2, double s) noexcept nogil:
    if mode == 0:
        return _psi(kind, a, b, s, p2)
    if mode == 1:
        return _psi(kind, a, b, p1, s)
    if mode == 2:
        return _psi(kind, a, b, fmin(fmax(p1 + s * d1, 0.0), 1.0), fmin(fmax(p2 + s * d2, 0.0), 1.0))
    return -_phi(kind, a, b, s)


cdef void _golden(int mode, int kind, const double[::1] a, const double[::1] b,
                  double p1, double p2, double d1, double d2,
                  double lo, double hi, double tol, int maxiter,
                  double* out_x, double* out_g) noexcept nogil:
    cdef double glo = _g(mode, kind, a, b, p1, p2, d1, d2, lo)
    cdef double ghi = _g(mode, kind, a, b, p1, p2, d1, d2, hi)
    cdef double x0, x1, c, d, gc, gd
    cdef int it = 0
    cdef double bx = lo
    cdef double bg = glo
    if hi - lo > tol:
        x0 = lo
        x1 = hi
        c = x1 - INVPHI * (x1 - x0)
        d = x0 + INVPHI * (x1 - x0)
        gc = _g(mode, kind, a, b, p1, p2, d1, d2, c)
        gd = _g(mode, kind, a, b, p1, p2, d1, d2, d)
        while x1 - x0 > tol and it < maxiter:
            if gc >= gd:
                x1 = d
                d = c
                gd = gc
                c = x1 - INVPHI * (x1 - x0)
                gc = _g(mode, kind, a, b, p1, p2, d1, d2, c)
            else:
                x0 = c
                c = d
                gc = gd
                d = x0 + INVPHI * (x1 - x0)
                gd = _g(mode, kind, a, b, p1, p2, d1, d2, d)
            it += 1
        if gc > bg:
            bx = c
            bg = gc
        if gd > bg:
            bx = d
            bg = gd
    if ghi > bg:
        bx = hi
        bg = ghi
    out_x[0] = bx
    out_g[0] = bg


def profile_values(int kind, a, b, ts):
    cdef const double[::1] av = np.ascontiguousarray(a, dtype=float)
    cdef const double[::1] bv = np.ascontiguousarray(b, dtype=float)
    cdef const double[::1] tv = np.ascontiguousarray(ts, dtype=float).ravel()
    out = np.empty(tv.shape[0], dtype=float)
    cdef double[::1] ov = out
    cdef Py_ssize_t i
    with nogil:
        for i in range(tv.shape[0]):
            ov[i] = _feval(kind, av, bv, tv[i])
    return out.reshape(np.shape(ts))


def feval(int kind, a, b, double t):
    cdef const double[::1] av = np.ascontiguousarray(a, dtype=float)
    cdef const double[::1] bv = np.ascontiguousarray(b, dtype=float)
    return _feval(kind, av, bv, t)


def psi(int kind, a, b, double x1, double x2):
    cdef const double[::1] av = np.ascontiguousarray(a, dtype=float)
    cdef const double[::1] bv = np.ascontiguousarray(b, dtype=float)
    return _psi(kind, av, bv, x1, x2)


def phi(int kind, a, b, double x):
    cdef const double[::1] av = np.ascontiguousarray(a, dtype=float)
    cdef const double[::1] bv = np.ascontiguousarray(b, dtype=float)
    return _phi(kind, av, bv, x)


def golden_lower_axis(int kind, a, b, double x1, double x2, int axis,
                      double lo, double hi, double tol, int maxiter):
    cdef const double[::1] av = np.ascontiguousarray(a, dtype=float)
    cdef const double[::1] bv = np.ascontiguousarray(b, dtype=float)
    cdef double bx, bg
    _golden(0 if axis == 0 else 1, kind, av, bv, x1, x2, 0.0, 0.0, lo, hi, tol, maxiter, &bx, &bg)
    return bx, bg


cdef inline double _pattern_limit(double x1, double x2, double d1, double d2) noexcept nogil:
    cdef double smax = PATTERN_CAP
    if d1 < 0:
        smax = fmin(smax, -x1 / d1)
    if d2 > 0:
        smax = fmin(smax, (1.0 - x2) / d2)
    if d2 - d1 < 0:
        smax = fmin(smax, -(x2 - x1) / (d2 - d1))
    return fmax(smax, 0.0)


def polish_lower(int kind, a, b, double x1, double x2, double tol, int max_cycles):
    cdef const double[::1] av = np.ascontiguousarray(a, dtype=float)
    cdef const double[::1] bv = np.ascontiguousarray(b, dtype=float)
    cdef double val = _psi(kind, av, bv, x1, x2)
    cdef double x1o, x2o, vo, d1, d2, nd, smax, s, vs, bx1, bx2
    cdef int cycles = 0
    cdef int k
    with nogil:
        for k in range(1, max_cycles + 1):
            cycles = k
            x1o = x1
            x2o = x2
            vo = val
            _golden(0, kind, av, bv, x1, x2, 0.0, 0.0, 0.0, x2, tol, 200, &x1, &val)
            _golden(1, kind, av, bv, x1, x2, 0.0, 0.0, x1, 1.0, tol, 200, &x2, &val)
            d1 = x1 - x1o
            d2 = x2 - x2o
            nd = sqrt(d1 * d1 + d2 * d2)
            if nd > tol:
                smax = _pattern_limit(x1, x2, d1, d2)
                if smax > 0:
                    bx1 = x1
                    bx2 = x2
                    _golden(2, kind, av, bv, bx1, bx2, d1, d2, 0.0, smax, tol / nd, 200, &s, &vs)
                    if vs > val:
                        x1 = fmin(fmax(bx1 + s * d1, 0.0), 1.0)
                        x2 = fmin(fmax(bx2 + s * d2, x1), 1.0)
                        val = _psi(kind, av, bv, x1, x2)
            if nd <= tol and val - vo <= 1e-16:
                break
    return x1, x2, val, cycles


def golden_min_upper(int kind, a, b, double lo, double hi, double tol, int maxiter):
    cdef const double[::1] av = np.ascontiguousarray(a, dtype=float)
    cdef const double[::1] bv = np.ascontiguousarray(b, dtype=float)
    cdef double bx, bg
    _golden(3, kind, av, bv, 0.0, 0.0, 0.0, 0.0, lo, hi, tol, maxiter, &bx, &bg)
    return bx, -bg


def covered_mask(px, py, planes, double eps):
    cdef const double[::1] xv = np.ascontiguousarray(px, dtype=float)
    cdef const double[::1] yv = np.ascontiguousarray(py, dtype=float)
    cdef const double[:, :, ::1] pv = np.ascontiguousarray(planes, dtype=float)
    cdef Py_ssize_t n = xv.shape[0]
    cdef Py_ssize_t M = pv.shape[0]
    cdef Py_ssize_t E = pv.shape[1]
    out = np.zeros(n, dtype=np.uint8)
    cdef unsigned char[::1] ov = out
    cdef Py_ssize_t i, m, e
    cdef bint inside
    cdef double x, y
    with nogil:
        for i in range(n):
            x = xv[i]
            y = yv[i]
            for m in range(M):
                inside = True
                for e in range(E):
                    if pv[m, e, 0] * x + pv[m, e, 1] * y + pv[m, e, 2] < -eps:
                        inside = False
                        break
                if inside:
                    ov[i] = 1
                    break
    return out
