"""Lattice packing and covering densities of K_f.

The packing density is |K_f| / A^f with A^f the least area of a circumscribed
staircase S^f(x); the covering density is |K_f| / A_f with A_f the largest
area of an inscribed staircase S_f(x1, x2). Both extrema are found by a dense
grid followed by golden-section refinement.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy import ndimage

from . import kernels
from .errors import DomainError
from .geometry import ConvexPolygon, Lattice2
from .profiles import ConvexFunction, area_under, make_convex_function

UPPER_GRID = 4097
LOWER_GRID = 513
POLISH_TOL = 1e-10
FLAT_TOL = 1e-9
MAX_SEEDS = 6
_DEDUP = 1e-7


@dataclass(frozen=True)
class ArgSet:
    """Optimizers of a staircase area.

    `best` is the refined optimizer with the best value (ties broken toward
    smaller coordinates); `points` lists every distinct refined optimizer within
    1e-9 of the optimum; `segments` holds (start, end) pairs of flat optimal
    families located on the grid.
    """

    value: float
    best: object
    points: tuple = ()
    segments: tuple = ()

    @property
    def flat(self) -> bool:
        return bool(self.segments)


def _as_profile(f) -> ConvexFunction:
    return f if isinstance(f, ConvexFunction) else make_convex_function(f)


def _seed_indices(values: np.ndarray, is_opt: np.ndarray, n_max: int, sep: int, maximize: bool):
    """Indices of grid optima, best first, at least `sep` cells apart (Chebyshev)."""
    idx = np.argwhere(is_opt)
    if idx.size == 0:
        return []
    vals = values[tuple(idx.T)]
    order = np.lexsort(tuple(idx.T[::-1]) + ((-vals if maximize else vals),))
    chosen = []
    for k in order:
        p = idx[k]
        if all(np.max(np.abs(p - q)) > sep for q in chosen):
            chosen.append(p)
            if len(chosen) == n_max:
                break
    return [tuple(int(c) for c in p) for p in chosen]


def _dedupe(cands, value, maximize, fun):
    """Distinct optimizers within FLAT_TOL of `value`, sorted by coordinates.

    Two candidates are the same optimizer when they nearly coincide or when
    the midpoint between them is itself optimal (a flat ridge, as happens
    when the Hessian is nearly singular); each cluster keeps its best member.
    """

    def optimal(v):
        return v >= value - FLAT_TOL if maximize else v <= value + FLAT_TOL

    good = [c for c in cands if optimal(c[-1])]
    good.sort(key=lambda c: ((-c[-1] if maximize else c[-1]),) + tuple(c[:-1]))
    out = []
    for c in good:
        same = False
        for o in out:
            if max(abs(p - q) for p, q in zip(c[:-1], o[:-1])) <= _DEDUP:
                same = True
            else:
                mid = tuple(0.5 * (p + q) for p, q in zip(c[:-1], o[:-1]))
                same = optimal(float(fun(mid)))
            if same:
                break
        if not same:
            out.append(c)
    return sorted(out, key=lambda c: tuple(c[:-1]))


def minimize_upper_area(f, grid: int = UPPER_GRID, tol: float = POLISH_TOL) -> tuple:
    """A^f = min over x of |S^f(x)| = x + (1 - x) f(x), with its argmin set."""
    f = _as_profile(f)
    K = kernels.active()
    kind, a, b = f.kernel_args()
    ts = np.linspace(0.0, 1.0, grid)
    vals = ts + (1.0 - ts) * K.profile_values(kind, a, b, ts)
    left = np.concatenate(([np.inf], vals[:-1]))
    right = np.concatenate((vals[1:], [np.inf]))
    is_min = (vals <= left) & (vals <= right)
    seeds = _seed_indices(vals, is_min, MAX_SEEDS, 2, maximize=False)
    cands = []
    for (i,) in seeds:
        lo, hi = ts[max(i - 1, 0)], ts[min(i + 1, grid - 1)]
        cands.append(K.golden_min_upper(kind, a, b, float(lo), float(hi), tol, 200))
    knots = f.breakpoints
    for k0, k1 in zip(knots, knots[1:]):
        cands.append(K.golden_min_upper(kind, a, b, float(k0), float(k1), tol, 200))
    for k in knots:
        cands.append((float(k), float(K.phi(kind, a, b, float(k)))))
    cands = [(float(x), float(v)) for x, v in cands]
    best = min(cands, key=lambda c: (c[1], c[0]))
    points = _dedupe(cands, best[1], False, lambda p: K.phi(kind, a, b, p[0]))
    segments = []
    near = vals <= best[1] + FLAT_TOL
    labels, n = ndimage.label(near)
    for lab in range(1, n + 1):
        where = np.flatnonzero(labels == lab)
        if where[-1] - where[0] > 3:
            segments.append((float(ts[where[0]]), float(ts[where[-1]])))
    if segments:
        points = [p for p in points if not any(s0 - 2.0 / grid <= p[0] <= s1 + 2.0 / grid for s0, s1 in segments)]
    return best[1], ArgSet(best[1], best[0], tuple(p[0] for p in points), tuple(segments))


def _lower_grid(F: np.ndarray, ts: np.ndarray) -> np.ndarray:
    psi = ts[:, None] * F[:, None] + (ts[None, :] - ts[:, None]) * F[None, :]
    psi[np.tril_indices(ts.size, -1)] = -np.inf
    return psi


def maximize_lower_area(f, grid: int = LOWER_GRID, tol: float = POLISH_TOL) -> tuple:
    """A_f = max over 0 <= x1 <= x2 <= 1 of |S_f(x1, x2)| = x1 f(x1) + (x2 - x1) f(x2)."""
    f = _as_profile(f)
    K = kernels.active()
    kind, a, b = f.kernel_args()
    ts = np.linspace(0.0, 1.0, grid)
    F = K.profile_values(kind, a, b, ts)
    psi = _lower_grid(F, ts)
    filt = ndimage.maximum_filter(psi, size=3, mode="constant", cval=-np.inf)
    is_max = np.isfinite(psi) & (psi >= filt)
    seeds = [(float(ts[i]), float(ts[j])) for i, j in _seed_indices(psi, is_max, MAX_SEEDS, 3, maximize=True)]
    knots = [float(k) for k in f.breakpoints]
    if knots:
        for k in knots:
            x2, _ = K.golden_lower_axis(kind, a, b, k, k, 1, k, 1.0, tol, 200)
            seeds.append((k, float(x2)))
            x1, _ = K.golden_lower_axis(kind, a, b, k, k, 0, 0.0, k, tol, 200)
            seeds.append((float(x1), k))
        pairs = [(k1, k2) for k1 in knots for k2 in knots if k1 <= k2]
        seeds.append(max(pairs, key=lambda p: (K.psi(kind, a, b, p[0], p[1]), -p[0], -p[1])))
    cands = []
    for x1, x2 in seeds:
        cands.append(tuple(float(c) for c in K.polish_lower(kind, a, b, x1, x2, tol, 500)[:3]))
    best = max(cands, key=lambda c: (c[2], -c[0], -c[1]))
    points = _dedupe(cands, best[2], True, lambda p: K.psi(kind, a, b, p[0], p[1]))
    segments = []
    near = psi >= best[2] - FLAT_TOL
    # optimal ridges need not be grid-aligned, so grid optima up to two cells
    # apart are joined before labelling
    joined = ndimage.binary_dilation(near, structure=np.ones((5, 5), dtype=bool))
    labels, n = ndimage.label(joined, structure=np.ones((3, 3), dtype=int))
    labels[~near] = 0
    for lab in range(1, n + 1):
        where = np.argwhere(labels == lab)
        if where.size == 0:
            continue
        if np.max(where.max(axis=0) - where.min(axis=0)) > 3:
            pts = ts[where]
            d = ((pts[:, None, :] - pts[None, :, :]) ** 2).sum(-1)
            i, j = np.unravel_index(int(np.argmax(d)), d.shape)
            s, e = sorted([tuple(map(float, pts[i])), tuple(map(float, pts[j]))])
            segments.append((s, e))
    if segments:
        cell = 2.0 / (grid - 1)

        def on_segment(p):
            for s, e in segments:
                lo = np.minimum(s, e) - cell
                hi = np.maximum(s, e) + cell
                if np.all(np.asarray(p) >= lo) and np.all(np.asarray(p) <= hi):
                    return True
            return False

        points = [p for p in points if not on_segment(p[:2])]
    return best[2], ArgSet(best[2], (best[0], best[1]), tuple(p[:2] for p in points), tuple(segments))


def packing_lattice_from_x(f, x: float) -> Lattice2:
    """Λ^f(x) = L((x - 1, 1), (x, f(x))); S^f(x) + Λ^f(x) tiles the plane."""
    if not 0.0 <= x <= 1.0:
        raise DomainError(f"x={x} outside [0, 1]")
    return Lattice2((x - 1.0, 1.0), (x, float(f(x))))


def covering_lattice_from_pair(f, x1: float, x2: float) -> Lattice2:
    """Λ_f(x1, x2) = L((x1 - x2, f(x1)), (x1, f(x2))); S_f(x1, x2) + Λ_f tiles the plane."""
    if not 0.0 <= x1 <= x2 <= 1.0:
        raise DomainError(f"need 0 <= x1 <= x2 <= 1, got ({x1}, {x2})")
    return Lattice2((x1 - x2, float(f(x1))), (x1, float(f(x2))))


@dataclass(frozen=True)
class KfReport:
    area_K: float
    A_upper: float
    A_lower: float
    x_upper: ArgSet
    x_pair_lower: ArgSet
    delta: float
    theta: float
    packing_lattice: Lattice2
    covering_lattice: Lattice2
    grids: dict = field(default_factory=dict)


def kf_densities(f, grid_lower: int = LOWER_GRID, grid_upper: int = UPPER_GRID) -> KfReport:
    f = _as_profile(f)
    area = area_under(f)
    A_up, x_up = minimize_upper_area(f, grid_upper)
    A_lo, x_lo = maximize_lower_area(f, grid_lower)
    delta = area / A_up
    theta = area / A_lo
    slack = 1e-9
    if not (A_lo <= area + slack and area <= A_up + slack):
        raise ArithmeticError(f"staircase bounds violated: {A_lo} <= {area} <= {A_up}")
    if not (2.0 / 3.0 - slack <= delta <= 1.0 + slack and 1.0 - slack <= theta <= 1.5 + slack):
        raise ArithmeticError(f"densities outside the universal bounds: delta={delta}, theta={theta}")
    return KfReport(
        area_K=area,
        A_upper=A_up,
        A_lower=A_lo,
        x_upper=x_up,
        x_pair_lower=x_lo,
        delta=delta,
        theta=theta,
        packing_lattice=packing_lattice_from_x(f, x_up.best),
        covering_lattice=covering_lattice_from_pair(f, *x_lo.best),
        grids={"lower": grid_lower, "upper": grid_upper},
    )


def pair_margins(f, x1: float, x2: float) -> tuple:
    """Slacks of the four necessary conditions on an inscribed-staircase maximizer:
    2x1 - x2, 2x2 - 1 - x1, 2f(x2) - f(x1), 2f(x1) - 1 - f(x2). All are >= 0 at an argmax."""
    f1, f2 = float(f(x1)), float(f(x2))
    return (2 * x1 - x2, 2 * x2 - 1 - x1, 2 * f2 - f1, 2 * f1 - 1 - f2)


def reciprocal_sum(report: KfReport) -> float:
    return 1.0 / report.delta + 1.0 / report.theta


def _derivative(f: ConvexFunction, t: float) -> float:
    c = f.coeffs
    return float(sum(k * c[k] * t ** (k - 1) for k in range(1, len(c))))


def _clip_halfplane(pts, a, b, c):
    """Keep the part of the polygon with a*x + b*y <= c."""
    out = []
    n = len(pts)
    for k in range(n):
        p, q = pts[k], pts[(k + 1) % n]
        dp = a * p[0] + b * p[1] - c
        dq = a * q[0] + b * q[1] - c
        if dp <= 0:
            out.append(p)
        if (dp < 0 < dq) or (dq < 0 < dp):
            s = dp / (dp - dq)
            out.append((p[0] + s * (q[0] - p[0]), p[1] + s * (q[1] - p[1])))
    return out


def outer_polygon(f, x_cut: float, n: int = 64):
    """Convex polygon containing K_f and contained in S^f(x_cut).

    For piecewise-linear f this is K_f itself. For polynomial f it is cut out
    by tangent lines at n + 1 equally spaced abscissas plus x_cut; concavity
    puts every tangent above the graph, and the tangents at 0 and x_cut keep
    the polygon inside the staircase.
    """
    f = _as_profile(f)
    if _is_polygonal(f):
        return kf_polygon(f)
    ts = sorted(set(np.linspace(0.0, 1.0, n + 1).tolist()) | {float(x_cut)})
    pts = [(0.0, 0.0), (1.0, 0.0), (1.0, 1.0), (0.0, 1.0)]
    for t in ts:
        d = _derivative(f, t)
        # y <= f(t) + d (s - t)  <=>  -d s + y <= f(t) - d t
        pts = _clip_halfplane(pts, -d, 1.0, float(f(t)) - d * t)
    return ConvexPolygon(pts)


def inner_polygon(f, cuts=(), n: int = 64):
    """Convex polygon inside K_f through the graph points at n + 1 equally
    spaced abscissas and at `cuts`; it contains S_f(x1, x2) when both cuts are given."""
    f = _as_profile(f)
    if _is_polygonal(f):
        return kf_polygon(f)
    ts = sorted(set(np.linspace(0.0, 1.0, n + 1).tolist()) | {float(c) for c in cuts})
    return ConvexPolygon([(0.0, 0.0), (1.0, 0.0)] + [(t, float(f(t))) for t in reversed(ts)])


def _is_polygonal(f: ConvexFunction) -> bool:
    return f.kind == "pwl" or len(f.coeffs) <= 2


def kf_polygon(f):
    """K_f as a polygon; exact for piecewise-linear f and affine polynomials."""
    f = _as_profile(f)
    if not _is_polygonal(f):
        raise DomainError("K_f is a polygon only for piecewise-linear f")
    if f.kind == "poly":
        return ConvexPolygon([(0.0, 0.0), (1.0, 0.0), (1.0, float(f(1.0))), (0.0, 1.0)])
    return ConvexPolygon([(0.0, 0.0), (1.0, 0.0)] + [(t, v) for t, v in reversed(list(zip(f.knots, f.values)))])
