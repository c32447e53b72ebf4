"""Brute-force certificates for lattice arrangements K + L.

Packing: the overlap area |K ∩ (K + w)| is computed by polygon clipping for
every lattice vector w that can possibly produce an overlap. Covering: the
fundamental parallelogram of L is sampled on a grid and every sample must lie
in some translate K + w. Neither check uses any closed-form density.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import kernels
from .errors import DomainError
from .geometry import ConvexPolygon, Lattice2, Point2, StaircasePolygon, intersection_area

DEFAULT_TOL = 1e-9
DEFAULT_GRID = 512
MIN_GRID = 64
TILING_DET_TOL = 1e-9


def default_tol() -> float:
    """Certification tolerance, overridable through the LATTICEQ_TOL environment variable."""
    raw = os.environ.get("LATTICEQ_TOL")
    if not raw:
        return DEFAULT_TOL
    try:
        val = float(raw)
    except ValueError as exc:
        raise DomainError(f"LATTICEQ_TOL={raw!r} is not a number") from exc
    if not (val > 0 and math.isfinite(val)):
        raise DomainError(f"LATTICEQ_TOL={raw!r} must be a positive number")
    return val


@dataclass(frozen=True)
class Certificate:
    """Verdict for one arrangement. Fields that do not apply to `mode` are None."""

    mode: str
    ok: bool
    density: float
    window_radius: int
    grid_resolution: Optional[int] = None
    max_overlap_area: Optional[float] = None
    worst_offset: Optional[tuple] = None
    uncovered_fraction: Optional[float] = None
    worst_point: Optional[Point2] = None
    tol: Optional[float] = None
    det_matches_area: Optional[bool] = None
    basis: Optional[tuple] = None


def _pieces(K):
    if isinstance(K, (ConvexPolygon, StaircasePolygon)):
        return K.pieces
    raise TypeError(f"expected ConvexPolygon or StaircasePolygon, got {type(K).__name__}")


def _all_vertices(K) -> np.ndarray:
    return np.array([(p.x, p.y) for piece in _pieces(K) for p in piece.vertices], dtype=float)


def window_radius(K, L: Lattice2) -> int:
    """Index radius R, in the reduced basis, beyond which K and K + w cannot meet.

    Uses the larger of ceil(diam/shortest) + 1 and the bound
    |i|, |j| <= diam * max(|u|, |v|) / |det| that follows from Cramer's rule.
    """
    R = L.reduced()
    diam = K.diameter()
    heuristic = math.ceil(diam / R.shortest_length()) + 1
    longest = max(math.hypot(*R.u), math.hypot(*R.v))
    rigorous = math.ceil(diam * longest / R.covolume + 1e-9)
    return int(max(heuristic, rigorous))


def _bbox_sep(a, b, w) -> bool:
    return a[2] + 1e-12 < b[0] + w[0] or b[2] + w[0] + 1e-12 < a[0] or a[3] + 1e-12 < b[1] + w[1] or b[3] + w[1] + 1e-12 < a[1]


def overlap_area(K, w) -> float:
    """|K ∩ (K + w)| summed over convex pieces (pieces of K have disjoint interiors)."""
    pieces = _pieces(K)
    boxes = [p.bbox() for p in pieces]
    total = 0.0
    for P, bp in zip(pieces, boxes):
        for Q, bq in zip(pieces, boxes):
            if _bbox_sep(bp, bq, w):
                continue
            total += intersection_area(P, Q.translate(w))
    return total


def verify_packing(K, L: Lattice2, tol: Optional[float] = None, window: Optional[int] = None) -> Certificate:
    """Certify that the translates K + w, w in L, have disjoint interiors."""
    if not isinstance(L, Lattice2):
        raise DomainError("verify_packing needs a Lattice2")
    tol = default_tol() if tol is None else tol
    R = L.reduced()
    r = window_radius(K, L) if window is None else int(window)
    worst, worst_ij = 0.0, None
    for i in range(0, r + 1):
        for j in range(-r, r + 1):
            if i == 0 and j <= 0:
                continue  # |K ∩ (K + w)| = |K ∩ (K - w)|
            w = R.point(i, j)
            a = overlap_area(K, w)
            if a > worst:
                worst, worst_ij = a, (i, j)
    return Certificate(
        mode="packing",
        ok=worst < tol,
        density=K.area / L.covolume,
        window_radius=r,
        max_overlap_area=worst,
        worst_offset=worst_ij,
        tol=tol,
        basis=(R.u, R.v),
    )


def _planes(K, offsets: np.ndarray) -> np.ndarray:
    """Half-plane rows of every convex piece of K translated by every offset,
    padded to a common edge count with the always-true row (0, 0, 1)."""
    pieces = _pieces(K)
    E = max(len(p.vertices) for p in pieces)
    out = np.zeros((len(offsets) * len(pieces), E, 3))
    out[:, :, 2] = 1.0
    k = 0
    for w in offsets:
        for p in pieces:
            rows = np.array(p.halfplanes())
            rows[:, 2] -= rows[:, 0] * w[0] + rows[:, 1] * w[1]
            out[k, : len(rows)] = rows
            k += 1
    return out


def _segment_distance(px, py, ax, ay, bx, by):
    ex, ey = bx - ax, by - ay
    ln2 = ex * ex + ey * ey
    t = np.clip(((px - ax) * ex + (py - ay) * ey) / ln2, 0.0, 1.0)
    return np.hypot(px - (ax + t * ex), py - (ay + t * ey))


def _distance_to_translates(px, py, K, offsets) -> np.ndarray:
    """Euclidean distance from each point to the union of the translates."""
    best = np.full(px.shape, np.inf)
    for w in offsets:
        for piece in _pieces(K):
            vs = [(p.x + w[0], p.y + w[1]) for p in piece.vertices]
            d = np.full(px.shape, np.inf)
            for a, b in zip(vs, vs[1:] + vs[:1]):
                d = np.minimum(d, _segment_distance(px, py, a[0], a[1], b[0], b[1]))
            inside = np.ones(px.shape, dtype=bool)
            for nx, ny, c in piece.halfplanes():
                inside &= nx * (px - w[0]) + ny * (py - w[1]) + c >= 0
            d[inside] = 0.0
            best = np.minimum(best, d)
    return best


def _covering_offsets(K, R: Lattice2, window: Optional[int]):
    """Lattice vectors w for which K + w can meet the fundamental cell of R."""
    if window is not None:
        r = int(window)
        ii, jj = np.meshgrid(np.arange(-r, r + 1), np.arange(-r, r + 1), indexing="ij")
        radius = r
    else:
        cell = np.array([(0.0, 0.0), R.u, R.v, (R.u[0] + R.v[0], R.u[1] + R.v[1])])
        verts = _all_vertices(K)
        diffs = (cell[:, None, :] - verts[None, :, :]).reshape(-1, 2)
        a = (diffs[:, 0] * R.v[1] - diffs[:, 1] * R.v[0]) / R.det
        b = (R.u[0] * diffs[:, 1] - R.u[1] * diffs[:, 0]) / R.det
        i0, i1 = math.floor(a.min() - 1e-9), math.ceil(a.max() + 1e-9)
        j0, j1 = math.floor(b.min() - 1e-9), math.ceil(b.max() + 1e-9)
        ii, jj = np.meshgrid(np.arange(i0, i1 + 1), np.arange(j0, j1 + 1), indexing="ij")
        radius = int(max(abs(i0), abs(i1), abs(j0), abs(j1)))
    ii, jj = ii.ravel(), jj.ravel()
    offs = np.stack([ii * R.u[0] + jj * R.v[0], ii * R.u[1] + jj * R.v[1]], axis=1)
    # keep translates whose bounding box meets the cell's bounding box
    x0, y0, x1, y1 = K.bbox()
    cx = [0.0, R.u[0], R.v[0], R.u[0] + R.v[0]]
    cy = [0.0, R.u[1], R.v[1], R.u[1] + R.v[1]]
    keep = (
        (offs[:, 0] + x0 <= max(cx) + 1e-9)
        & (offs[:, 0] + x1 >= min(cx) - 1e-9)
        & (offs[:, 1] + y0 <= max(cy) + 1e-9)
        & (offs[:, 1] + y1 >= min(cy) - 1e-9)
    )
    return offs[keep], radius


def verify_covering(
    K, L: Lattice2, grid_n: int = DEFAULT_GRID, eps: Optional[float] = None, window: Optional[int] = None
) -> Certificate:
    """Certify that every sample alpha*u + beta*v, alpha, beta in {0, 1/n, ..., (n-1)/n},
    of a fundamental cell lies in some translate K + w (within eps)."""
    if not isinstance(L, Lattice2):
        raise DomainError("verify_covering needs a Lattice2")
    if grid_n < MIN_GRID:
        raise DomainError("grid_n must be at least 64")
    eps = default_tol() if eps is None else eps
    R = L.reduced()
    offsets, radius = _covering_offsets(K, R, window)
    s = np.arange(grid_n, dtype=float) / grid_n
    al, be = np.meshgrid(s, s, indexing="ij")
    px = (al * R.u[0] + be * R.v[0]).ravel()
    py = (al * R.u[1] + be * R.v[1]).ravel()
    if len(offsets):
        mask = kernels.active().covered_mask(px, py, _planes(K, offsets), eps).astype(bool)
    else:
        mask = np.zeros(px.shape, dtype=bool)
    missing = np.flatnonzero(~mask)
    worst = None
    if missing.size:
        qx, qy = px[missing], py[missing]
        d = _distance_to_translates(qx, qy, K, offsets) if len(offsets) else np.full(qx.shape, np.inf)
        k = int(np.argmax(d))
        worst = Point2(float(qx[k]), float(qy[k]))
    return Certificate(
        mode="covering",
        ok=missing.size == 0,
        density=K.area / L.covolume,
        window_radius=radius,
        grid_resolution=grid_n,
        uncovered_fraction=missing.size / px.size,
        worst_point=worst,
        tol=eps,
        basis=(R.u, R.v),
    )


def verify_tiling(
    K, L: Lattice2, grid_n: int = DEFAULT_GRID, tol: Optional[float] = None, window: Optional[int] = None
) -> Certificate:
    """Packing and covering at once; a tiling also has |det L| = |K| (within 1e-9)."""
    tol = default_tol() if tol is None else tol
    pk = verify_packing(K, L, tol, window)
    cv = verify_covering(K, L, grid_n, tol, window)
    det_ok = abs(L.covolume - K.area) <= TILING_DET_TOL
    return Certificate(
        mode="tiling",
        ok=pk.ok and cv.ok and det_ok,
        density=pk.density,
        window_radius=max(pk.window_radius, cv.window_radius),
        grid_resolution=grid_n,
        max_overlap_area=pk.max_overlap_area,
        worst_offset=pk.worst_offset,
        uncovered_fraction=cv.uncovered_fraction,
        worst_point=cv.worst_point,
        tol=tol,
        det_matches_area=det_ok,
        basis=pk.basis,
    )
