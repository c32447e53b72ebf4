"""Pure-Python/numpy implementation of the hot kernels (fallback for _ckernels).

Profiles are passed as (kind, a, b): kind 0 is a polynomial with coefficients
a (b unused), kind 1 is piecewise linear with knots a and values b.
"""

from __future__ import annotations

import math
from bisect import bisect_right

import numpy as np

INVPHI = (math.sqrt(5.0) - 1.0) / 2.0
PATTERN_CAP = 1e3


def feval(kind, a, b, t):
    if kind == 0:
        acc = 0.0
        for i in range(len(a) - 1, -1, -1):
            acc = acc * t + a[i]
        return acc
    n = len(a)
    if t <= a[0]:
        return b[0]
    if t >= a[n - 1]:
        return b[n - 1]
    hi = bisect_right(a, t)
    lo = hi - 1
    return b[lo] + (b[hi] - b[lo]) * (t - a[lo]) / (a[hi] - a[lo])


def profile_values(kind, a, b, ts):
    ts = np.asarray(ts, dtype=float)
    if kind == 0:
        return np.polynomial.polynomial.polyval(ts, a)
    return np.interp(ts, a, b)


def psi(kind, a, b, x1, x2):
    """Area of the inscribed staircase S_f(x1, x2)."""
    return x1 * feval(kind, a, b, x1) + (x2 - x1) * feval(kind, a, b, x2)


def phi(kind, a, b, x):
    """Area of the circumscribed staircase S^f(x)."""
    return x + (1.0 - x) * feval(kind, a, b, x)


def _golden(g, lo, hi, tol, maxiter):
    """Maximize g on [lo, hi]; endpoints are always candidates, ties go to the smaller argument."""
    glo, ghi = g(lo), g(hi)
    cands = [(lo, glo)]
    if hi - lo > tol:
        x0, x1 = lo, hi
        c = x1 - INVPHI * (x1 - x0)
        d = x0 + INVPHI * (x1 - x0)
        gc, gd = g(c), g(d)
        it = 0
        while x1 - x0 > tol and it < maxiter:
            if gc >= gd:
                x1, d, gd = d, c, gc
                c = x1 - INVPHI * (x1 - x0)
                gc = g(c)
            else:
                x0, c, gc = c, d, gd
                d = x0 + INVPHI * (x1 - x0)
                gd = g(d)
            it += 1
        cands += [(c, gc), (d, gd)]
    cands.append((hi, ghi))
    best_x, best_g = cands[0]
    for x, gx in cands[1:]:
        if gx > best_g:
            best_x, best_g = x, gx
    return best_x, best_g


def _lists(a, b):
    return [float(v) for v in a], [float(v) for v in b]


def golden_lower_axis(kind, a, b, x1, x2, axis, lo, hi, tol, maxiter):
    """Maximize psi over one coordinate (axis 0 -> x1, axis 1 -> x2) within [lo, hi]."""
    if not isinstance(a, list):
        a, b = _lists(a, b)
    if axis == 0:
        return _golden(lambda s: psi(kind, a, b, s, x2), lo, hi, tol, maxiter)
    return _golden(lambda s: psi(kind, a, b, x1, s), lo, hi, tol, maxiter)


def _pattern_limit(x1, x2, d1, d2):
    smax = PATTERN_CAP
    if d1 < 0:
        smax = min(smax, -x1 / d1)
    if d2 > 0:
        smax = min(smax, (1.0 - x2) / d2)
    if d2 - d1 < 0:
        smax = min(smax, -(x2 - x1) / (d2 - d1))
    return max(smax, 0.0)


def polish_lower(kind, a, b, x1, x2, tol, max_cycles):
    """Cyclic coordinate golden-section ascent on psi with a pattern move per cycle.

    Returns (x1, x2, value, cycles). psi is concave in each coordinate for
    concave non-increasing f, so every coordinate search is unimodal.
    """
    a, b = _lists(a, b)
    val = psi(kind, a, b, x1, x2)
    cycles = 0
    for cycles in range(1, max_cycles + 1):
        x1o, x2o, vo = x1, x2, val
        x1, val = golden_lower_axis(kind, a, b, x1, x2, 0, 0.0, x2, tol, 200)
        x2, val = golden_lower_axis(kind, a, b, x1, x2, 1, x1, 1.0, tol, 200)
        d1, d2 = x1 - x1o, x2 - x2o
        nd = math.hypot(d1, d2)
        if nd > tol:
            smax = _pattern_limit(x1, x2, d1, d2)
            if smax > 0:
                bx1, bx2 = x1, x2
                s, vs = _golden(
                    lambda s: psi(kind, a, b, min(max(bx1 + s * d1, 0.0), 1.0), min(max(bx2 + s * d2, 0.0), 1.0)),
                    0.0, smax, tol / nd, 200,
                )
                if vs > val:
                    x1 = min(max(bx1 + s * d1, 0.0), 1.0)
                    x2 = min(max(bx2 + s * d2, x1), 1.0)
                    val = psi(kind, a, b, x1, x2)
        if nd <= tol and val - vo <= 1e-16:
            break
    return x1, x2, val, cycles


def golden_min_upper(kind, a, b, lo, hi, tol, maxiter):
    """Minimize phi on [lo, hi]; returns (x, value)."""
    a, b = _lists(a, b)
    x, g = _golden(lambda s: -phi(kind, a, b, s), lo, hi, tol, maxiter)
    return x, -g


def covered_mask(px, py, planes, eps):
    """1 where (px, py) satisfies every half-plane row of at least one polygon.

    planes has shape (M, E, 3) with rows (nx, ny, c); padding rows (0, 0, 1)
    are always satisfied.
    """
    px = np.asarray(px, dtype=float)
    py = np.asarray(py, dtype=float)
    covered = np.zeros(px.shape[0], dtype=bool)
    idx = np.arange(px.shape[0])
    for m in range(planes.shape[0]):
        if idx.size == 0:
            break
        qx, qy = px[idx], py[idx]
        inside = np.ones(idx.size, dtype=bool)
        for e in range(planes.shape[1]):
            nx, ny, c = planes[m, e]
            inside &= nx * qx + ny * qy + c >= -eps
        covered[idx[inside]] = True
        idx = idx[~inside]
    return covered.astype(np.uint8)
