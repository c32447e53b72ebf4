"""Planar primitives: points, lattices, convex polygons, affine maps and the
two staircase hexagons bounding K_f from outside and inside."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, NamedTuple, Sequence

from .errors import DomainError

COLLINEAR_TOL = 1e-12
EMPTY_AREA = 1e-12


class Point2(NamedTuple):
    x: float
    y: float


def _cross(o, a, b) -> float:
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def _signed_area(pts: Sequence[Sequence[float]]) -> float:
    s = 0.0
    n = len(pts)
    for i in range(n):
        x0, y0 = pts[i]
        x1, y1 = pts[(i + 1) % n]
        s += x0 * y1 - x1 * y0
    return 0.5 * s


def _clean_ring(pts, tol=COLLINEAR_TOL):
    """Drop repeated and collinear consecutive vertices of a closed ring."""
    out = []
    for p in pts:
        p = Point2(float(p[0]), float(p[1]))
        if out and math.hypot(p.x - out[-1].x, p.y - out[-1].y) <= tol:
            continue
        out.append(p)
    while len(out) > 1 and math.hypot(out[0].x - out[-1].x, out[0].y - out[-1].y) <= tol:
        out.pop()
    changed = True
    while changed and len(out) >= 3:
        changed = False
        for i in range(len(out)):
            a, b, c = out[i - 1], out[i], out[(i + 1) % len(out)]
            scale = max(math.hypot(c.x - a.x, c.y - a.y), 1.0)
            if abs(_cross(a, b, c)) <= tol * scale:
                # collinear; b is removable when it does not reverse direction
                if (b.x - a.x) * (c.x - b.x) + (b.y - a.y) * (c.y - b.y) >= 0:
                    del out[i]
                    changed = True
                    break
    return out


@dataclass(frozen=True)
class Lattice2:
    """The lattice {i*u + j*v : i, j integers}."""

    u: tuple
    v: tuple
    det: float = field(init=False)

    def __post_init__(self):
        u = (float(self.u[0]), float(self.u[1]))
        v = (float(self.v[0]), float(self.v[1]))
        if not all(math.isfinite(c) for c in u + v):
            raise DomainError(f"non-finite lattice basis {u}, {v}")
        det = u[0] * v[1] - u[1] * v[0]
        if not abs(det) > 0.0:
            raise DomainError(f"degenerate lattice basis {u}, {v}")
        object.__setattr__(self, "u", u)
        object.__setattr__(self, "v", v)
        object.__setattr__(self, "det", det)

    @property
    def covolume(self) -> float:
        return abs(self.det)

    def point(self, i: int, j: int) -> tuple:
        return (i * self.u[0] + j * self.v[0], i * self.u[1] + j * self.v[1])

    def coords(self, w) -> tuple:
        """Real coordinates of w in the basis (u, v)."""
        a = (w[0] * self.v[1] - w[1] * self.v[0]) / self.det
        b = (self.u[0] * w[1] - self.u[1] * w[0]) / self.det
        return a, b

    def contains(self, w, tol: float = 1e-9) -> bool:
        a, b = self.coords(w)
        return abs(a - round(a)) <= tol and abs(b - round(b)) <= tol

    def same_lattice(self, other: "Lattice2", tol: float = 1e-9) -> bool:
        """Mutual membership of the two bases."""
        return (
            self.contains(other.u, tol)
            and self.contains(other.v, tol)
            and other.contains(self.u, tol)
            and other.contains(self.v, tol)
        )

    def reduced(self) -> "Lattice2":
        """Lagrange-Gauss reduced basis of the same lattice (|u| <= |v|, |u.v| <= |u|^2/2)."""
        u, v = self.u, self.v
        nu = u[0] ** 2 + u[1] ** 2
        nv = v[0] ** 2 + v[1] ** 2
        if nu > nv:
            u, v, nu, nv = v, u, nv, nu
        for _ in range(200):
            m = round((u[0] * v[0] + u[1] * v[1]) / nu)
            if m:
                v = (v[0] - m * u[0], v[1] - m * u[1])
                nv = v[0] ** 2 + v[1] ** 2
            if nv >= nu:
                break
            u, v, nu, nv = v, u, nv, nu
        return Lattice2(u, v)

    def shortest_length(self) -> float:
        r = self.reduced()
        return math.hypot(*r.u)

    def scaled(self, s: float) -> "Lattice2":
        return Lattice2((s * self.u[0], s * self.u[1]), (s * self.v[0], s * self.v[1]))


class ConvexPolygon:
    """Convex polygon with counterclockwise vertices.

    Repeated and collinear vertices are dropped on construction, so a
    quadrilateral with a collinear triple becomes a triangle.
    """

    __slots__ = ("vertices", "area")

    def __init__(self, vertices):
        pts = [(float(p[0]), float(p[1])) for p in vertices]
        if not all(math.isfinite(c) for p in pts for c in p):
            raise DomainError("non-finite polygon vertex")
        if _signed_area(pts) < 0:
            pts.reverse()
        ring = _clean_ring(pts)
        if len(ring) < 3:
            raise DomainError("polygon needs at least 3 non-collinear vertices")
        n = len(ring)
        for i in range(n):
            a, b, c = ring[i - 1], ring[i], ring[(i + 1) % n]
            scale = max(math.hypot(b.x - a.x, b.y - a.y) * math.hypot(c.x - b.x, c.y - b.y), 1e-300)
            if _cross(a, b, c) < -COLLINEAR_TOL * max(scale, 1.0):
                raise DomainError("polygon is not convex")
        area = _signed_area(ring)
        if not area > 0:
            raise DomainError("polygon has no interior")
        self.vertices = tuple(ring)
        self.area = area

    @property
    def pieces(self) -> tuple:
        return (self,)

    def __repr__(self):
        return f"ConvexPolygon({[tuple(p) for p in self.vertices]})"

    def __eq__(self, other):
        return isinstance(other, ConvexPolygon) and self.vertices == other.vertices

    def __hash__(self):
        return hash(self.vertices)

    def translate(self, w) -> "ConvexPolygon":
        return ConvexPolygon([(p.x + w[0], p.y + w[1]) for p in self.vertices])

    def bbox(self) -> tuple:
        xs = [p.x for p in self.vertices]
        ys = [p.y for p in self.vertices]
        return min(xs), min(ys), max(xs), max(ys)

    def diameter(self) -> float:
        vs = self.vertices
        return max(math.hypot(a.x - b.x, a.y - b.y) for a in vs for b in vs)

    def halfplanes(self) -> list:
        """Rows (nx, ny, c) with unit inward normal; p is inside iff nx*px + ny*py + c >= 0."""
        rows = []
        vs = self.vertices
        for i in range(len(vs)):
            a, b = vs[i], vs[(i + 1) % len(vs)]
            ex, ey = b.x - a.x, b.y - a.y
            ln = math.hypot(ex, ey)
            nx, ny = -ey / ln, ex / ln
            rows.append((nx, ny, -(nx * a.x + ny * a.y)))
        return rows

    def contains(self, p, tol: float = 1e-9) -> bool:
        return all(nx * p[0] + ny * p[1] + c >= -tol for nx, ny, c in self.halfplanes())


@dataclass(frozen=True)
class StaircasePolygon:
    """A (generally non-convex) staircase hexagon kept as a union of rectangles
    with disjoint interiors; `vertices` is the counterclockwise outline."""

    vertices: tuple
    pieces: tuple

    @property
    def area(self) -> float:
        return sum(p.area for p in self.pieces)

    def bbox(self) -> tuple:
        xs = [p.x for p in self.vertices]
        ys = [p.y for p in self.vertices]
        return min(xs), min(ys), max(xs), max(ys)

    def diameter(self) -> float:
        vs = self.vertices
        return max(math.hypot(a.x - b.x, a.y - b.y) for a in vs for b in vs)

    def contains(self, p, tol: float = 1e-9) -> bool:
        return any(piece.contains(p, tol) for piece in self.pieces)

    def translate(self, w) -> "StaircasePolygon":
        return StaircasePolygon(
            tuple(Point2(p.x + w[0], p.y + w[1]) for p in self.vertices),
            tuple(piece.translate(w) for piece in self.pieces),
        )


@dataclass(frozen=True)
class AffineMap:
    """p -> linear @ p + shift. Entries may be floats or Fractions."""

    linear: tuple
    shift: tuple = (0, 0)

    def __post_init__(self):
        if abs(self.det) <= 1e-12:
            raise DomainError("affine map is not invertible")

    @property
    def det(self):
        (a, b), (c, d) = self.linear
        return a * d - b * c

    def __call__(self, p) -> tuple:
        (a, b), (c, d) = self.linear
        return (a * p[0] + b * p[1] + self.shift[0], c * p[0] + d * p[1] + self.shift[1])

    def inverse(self) -> "AffineMap":
        (a, b), (c, d) = self.linear
        det = self.det
        lin = ((d / det, -b / det), (-c / det, a / det))
        e, f = self.shift
        return AffineMap(lin, (-(lin[0][0] * e + lin[0][1] * f), -(lin[1][0] * e + lin[1][1] * f)))

    def compose(self, other: "AffineMap") -> "AffineMap":
        """self after other."""
        (a, b), (c, d) = self.linear
        (p, q), (r, s) = other.linear
        lin = ((a * p + b * r, a * q + b * s), (c * p + d * r, c * q + d * s))
        return AffineMap(lin, self(other.shift))

    @classmethod
    def identity(cls) -> "AffineMap":
        return cls(((1, 0), (0, 1)), (0, 0))


def polygon_area(P) -> float:
    """Area of a ConvexPolygon or StaircasePolygon (shoelace on the outline)."""
    return abs(_signed_area(P.vertices))


def clip_vertices(P: ConvexPolygon, Q: ConvexPolygon) -> list:
    """Sutherland-Hodgman clip of P by Q; boundary points are kept, so touching
    polygons give a degenerate (zero-area) vertex list rather than an empty one."""
    out = list(P.vertices)
    qv = Q.vertices
    for i in range(len(qv)):
        if not out:
            break
        a, b = qv[i], qv[(i + 1) % len(qv)]
        ex, ey = b.x - a.x, b.y - a.y
        inp, out = out, []
        s = inp[-1]
        ds = ex * (s[1] - a.y) - ey * (s[0] - a.x)
        for e in inp:
            de = ex * (e[1] - a.y) - ey * (e[0] - a.x)
            if de >= 0:
                if ds < 0:
                    t = ds / (ds - de)
                    out.append((s[0] + t * (e[0] - s[0]), s[1] + t * (e[1] - s[1])))
                out.append((e[0], e[1]))
            elif ds >= 0:
                t = ds / (ds - de)
                out.append((s[0] + t * (e[0] - s[0]), s[1] + t * (e[1] - s[1])))
            s, ds = e, de
    return out


def intersection_area(P: ConvexPolygon, Q: ConvexPolygon) -> float:
    pts = clip_vertices(P, Q)
    if len(pts) < 3:
        return 0.0
    return max(_signed_area(pts), 0.0)


def convex_intersection(P: ConvexPolygon, Q: ConvexPolygon):
    """P ∩ Q as a ConvexPolygon, or None when empty or degenerate (area < 1e-12)."""
    pts = clip_vertices(P, Q)
    if len(pts) < 3 or _signed_area(pts) < EMPTY_AREA:
        return None
    try:
        return ConvexPolygon(pts)
    except DomainError:
        return None


def affine_apply(M: AffineMap, P):
    if isinstance(P, StaircasePolygon):
        verts = [Point2(*map(float, M(p))) for p in P.vertices]
        if M.det < 0:
            verts.reverse()
        return StaircasePolygon(tuple(verts), tuple(affine_apply(M, q) for q in P.pieces))
    return ConvexPolygon([tuple(map(float, M(p))) for p in P.vertices])


def _rect(x0, y0, x1, y1):
    if x1 - x0 <= COLLINEAR_TOL or y1 - y0 <= COLLINEAR_TOL:
        return None
    return ConvexPolygon([(x0, y0), (x1, y0), (x1, y1), (x0, y1)])


def _staircase(outline, rects) -> StaircasePolygon:
    pieces = tuple(r for r in rects if r is not None)
    if not pieces:
        raise DomainError("staircase region has no interior")
    ring = _clean_ring(outline)
    return StaircasePolygon(tuple(ring), pieces)


def staircase_upper(f: Callable[[float], float], x: float) -> StaircasePolygon:
    """S^f(x): the unit square with the corner (x, 1] x (f(x), 1] removed.

    Its area is x + (1 - x) f(x) and it contains K_f.
    """
    if not 0.0 <= x <= 1.0:
        raise DomainError(f"x={x} outside [0, 1]")
    v = float(f(x))
    outline = [(0, 0), (1, 0), (1, v), (x, v), (x, 1), (0, 1)]
    return _staircase(outline, [_rect(0, 0, x, 1), _rect(x, 0, 1, v)])


def staircase_lower(f: Callable[[float], float], x1: float, x2: float) -> StaircasePolygon:
    """S_f(x1, x2): the two-step staircase inscribed in K_f, area x1 f(x1) + (x2 - x1) f(x2)."""
    if not 0.0 <= x1 <= x2 <= 1.0:
        raise DomainError(f"need 0 <= x1 <= x2 <= 1, got ({x1}, {x2})")
    a, b = float(f(x1)), float(f(x2))
    outline = [(0, 0), (x2, 0), (x2, b), (x1, b), (x1, a), (0, a)]
    return _staircase(outline, [_rect(0, 0, x1, a), _rect(x1, 0, x2, b)])
