"""Closed forms for convex quadrilaterals.

Every convex quadrilateral is affinely equivalent to
K_{x,y} = conv{(0,1), (0,0), (1,0), (x,y)} with (x, y) in the moduli triangle
D = {0 <= x <= y <= 1, x + y >= 1}. This module canonicalizes quadrilaterals,
evaluates the lattice packing/covering densities and optimal staircase areas,
and emits the families of optimal lattices.

All closed forms are written with integer constants and comparisons such as
``3 * x <= 1`` so that Fraction inputs are evaluated exactly; float inputs
treat values within BOUNDARY_TOL of a branch boundary as lying on it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Callable

from .errors import DomainError, InvalidQuadError
from .geometry import AffineMap, ConvexPolygon, Lattice2
from .profiles import ConvexFunction

BOUNDARY_TOL = 1e-12
DOMAIN_TOL = 1e-12
CANON_TOL = 1e-9
AGREE_TOL = 1e-12


def _exact(*vals) -> bool:
    return all(isinstance(v, (int, Fraction)) and not isinstance(v, bool) for v in vals)


def _eps(*vals):
    return 0 if _exact(*vals) else BOUNDARY_TOL


def as_number(v):
    """Fractions and ints stay exact; everything else becomes float."""
    if isinstance(v, bool):
        raise DomainError("boolean is not a coordinate")
    if isinstance(v, (int, Fraction)):
        return v
    v = float(v)
    if not math.isfinite(v):
        raise DomainError(f"non-finite coordinate {v}")
    return v


def in_D(x, y, tol: float = DOMAIN_TOL) -> bool:
    return x >= -tol and y <= 1 + tol and x <= y + tol and x + y >= 1 - tol


def _check_D(x, y):
    x, y = as_number(x), as_number(y)
    tol = 0 if _exact(x, y) else DOMAIN_TOL
    if not in_D(x, y, tol):
        raise DomainError(f"(x, y) = ({x}, {y}) is not in D = {{0 <= x <= y <= 1, x + y >= 1}}")
    return x, y


def _agree(values, what, tol=AGREE_TOL):
    """All branch formulas that apply at a boundary point must coincide."""
    vals = [v for v in values if v is not None]
    lo, hi = min(vals), max(vals)
    if hi - lo > tol * max(1.0, abs(float(hi))):
        raise ArithmeticError(f"branch formulas for {what} disagree at a boundary: {[float(v) for v in vals]}")
    return vals[0]


def _is_square(x, y, eps) -> bool:
    return abs(x - 1) <= eps and abs(y - 1) <= eps


# ---------------------------------------------------------------- regions


class Cardinality(str, Enum):
    ONE = "One"
    TWO = "Two"
    CONTINUUM = "Continuum"


@dataclass(frozen=True)
class RegionTag:
    """coarse in {B1, B2, B3}; covering_case in {E1..E5, SQUARE}; packing_case in {F1..F4, SQUARE}."""

    coarse: str
    covering_case: str
    packing_case: str


def _coarse(x, y, eps) -> str:
    if 3 * x <= 1 + eps:
        return "B1"
    if 3 * y >= 2 - eps:
        return "B2"
    return "B3"


def _covering_case(x, y, eps) -> str:
    if _is_square(x, y, eps):
        return "SQUARE"
    if abs(3 * x - 2) <= eps and abs(3 * y - 2) <= eps:
        return "E5"
    if 3 * x <= 1 + eps:
        return "E1"
    if 3 * y < 2 - eps:
        return "E3"
    if abs(x - y) <= eps:
        return "E4"
    return "E2"


def _packing_case(x, y, eps) -> str:
    if _is_square(x, y, eps):
        return "SQUARE"
    if abs(2 * x - 1) <= eps and abs(2 * y - 1) <= eps:
        return "F3"
    if abs(x - y) <= eps:
        return "F1"
    if abs(x + y - 1) <= eps:
        return "F2"
    return "F4"


def region_classify(x, y) -> RegionTag:
    x, y = _check_D(x, y)
    eps = _eps(x, y)
    return RegionTag(_coarse(x, y, eps), _covering_case(x, y, eps), _packing_case(x, y, eps))


# ---------------------------------------------------------------- densities


def delta_L(x, y):
    """Lattice packing density of K_{x,y}: 2y(x + y) / (4y + x - 1)."""
    x, y = _check_D(x, y)
    val = 2 * y * (x + y) / (4 * y + x - 1)
    if abs(x + y - 1) <= _eps(x, y):
        _agree([val, Fraction(2, 3) if _exact(x, y) else 2 / 3], "delta_L on the triangle edge")
    return val


def _third_branch(x, y) -> tuple:
    """(num, den) = (x(1-x) + y(1-y) - xy, 4(1-x)(1-y) - xy).

    Both vanish at (2/3, 2/3), so in floating point they are expanded about
    that corner, which keeps their ratio accurate next to it.
    """
    if _exact(x, y):
        return x * (1 - x) + y * (1 - y) - x * y, 4 * (1 - x) * (1 - y) - x * y
    a, b = x - 2 / 3, y - 2 / 3
    return -(a + b) - a * a - b * b - a * b, -2 * (a + b) + 3 * a * b


def _theta_branches(x, y, eps):
    """Every theta formula whose defining inequality holds (ties within eps count)."""
    out = {}
    if 3 * x <= 1 + eps:
        out["B1"] = 3 * (x + y) * (1 - x) / (2 * y)
    if 3 * x >= 1 - eps and 3 * y >= 2 - eps:
        out["B2"] = 2 * (x + y) / (y * (1 + 3 * x))
    if 3 * y < 2 + eps:
        num, den = _third_branch(x, y)
        if 3 * y < 2 - eps or num > 1e-9:
            out["B3"] = (x + y) * den / (2 * num)
    return out


def theta_L(x, y):
    """Lattice covering density of K_{x,y}, three branches keyed to B1, B2, B3."""
    x, y = _check_D(x, y)
    eps = _eps(x, y)
    branches = _theta_branches(x, y, eps)
    if len(branches) > 1:
        _agree(branches.values(), "theta_L")
    val = branches[_coarse(x, y, eps)] if _coarse(x, y, eps) in branches else next(iter(branches.values()))
    if abs(x + y - 1) <= eps:
        _agree([val, Fraction(3, 2) if _exact(x, y) else 1.5], "theta_L on the triangle edge")
    return val


# ---------------------------------------------------------------- inscribed staircases


def A_lower_components(x, y) -> tuple:
    """(A12, A11, A22): the largest inscribed staircase with its two cuts in
    ([0,x], [x,1]), ([0,x], [0,x]) and ([x,1], [x,1]) respectively."""
    x, y = _check_D(x, y)
    eps = _eps(x, y)
    if _is_square(x, y, eps):
        raise DomainError("the components are undefined for the unit square (1, 1)")
    if 3 * y >= 2:
        a12 = y * (1 + 3 * x) / 4
    else:
        num, den = _third_branch(x, y)
        a12 = num / den
    a22 = y / (3 * (1 - x)) if 3 * x <= 1 else y * (1 + 3 * x) / 4
    a11 = x / (3 * (1 - y)) if 3 * y <= 1 else x * (1 + 3 * y) / 4
    return a12, a11, a22


def A_lower_star(x, y):
    """A_* = max(A12, A11, A22); equals |K_{x,y}| / theta_L."""
    x, y = _check_D(x, y)
    eps = _eps(x, y)
    if _is_square(x, y, eps):
        return 1
    comps = A_lower_components(x, y)
    coarse = _coarse(x, y, eps)
    if coarse == "B1":
        val = y / (3 * (1 - x))
    elif coarse == "B2":
        val = y * (1 + 3 * x) / 4
    else:
        num, den = _third_branch(x, y)
        val = num / den
    _agree([val, max(comps)], "A_* against the component maximum", tol=1e-9)
    return val


@dataclass(frozen=True)
class Continuum:
    """The set {point(t) : t in [lo, hi]} (open/closed per flags)."""

    point: Callable
    lo: object
    hi: object
    description: str
    lo_closed: bool = True
    hi_closed: bool = True

    def sample(self, n: int) -> list:
        return [self.point(t) for t in sample_interval(self.lo, self.hi, n, self.lo_closed)]


def sample_interval(lo, hi, n: int, lo_closed: bool = True) -> list:
    """n parameters: equally spaced on [lo, hi], or lo + (hi - lo) k / n, k = 1..n, on (lo, hi]."""
    if n < 1:
        raise ValueError("need at least one sample")
    if not lo_closed:
        return [lo + (hi - lo) * Fraction(k, n) if _exact(lo, hi) else lo + (hi - lo) * k / n for k in range(1, n + 1)]
    if n == 1:
        return [(lo + hi) / 2]
    return [lo + (hi - lo) * (Fraction(k, n - 1) if _exact(lo, hi) else k / (n - 1)) for k in range(n)]


def X_lower_star(x, y):
    """Argmax set of the inscribed staircase area of K_{x,y}: a tuple of (x1, x2)
    pairs, or a Continuum at (2/3, 2/3) and at the square."""
    x, y = _check_D(x, y)
    eps = _eps(x, y)
    case = _covering_case(x, y, eps)
    third = Fraction(1, 3) if _exact(x, y) else 1 / 3
    if case == "SQUARE":
        return Continuum(lambda t: (t, 1), 0, 1, "(t, 1), t in [0, 1]")
    if case == "E1":
        return ((third, 2 * third),)
    if case == "E2":
        return ((x, (1 + x) / 2),)
    if case == "E3":
        den = _third_branch(x, y)[1]
        return ((x * (2 * (1 - x) - y) / den, ((2 - x) * (1 - y) - x * x) / den),)
    if case == "E4":
        return ((y, (1 + y) / 2), (y / 2, y))
    return Continuum(lambda t: (1 - t, 1 - t / 2), third, 2 * third, "(1 - t, 1 - t/2), t in [1/3, 2/3]")


def G(x, y, xp, yp):
    """Area of S_fbar(x', 1 - (1 - x) y'/y) for 0 <= x' <= x, 0 <= y' <= y."""
    return -(1 - y) * xp * xp / x - (1 - x) * yp * yp / y + xp + yp - xp * yp


def g(x, y, yp):
    """max over x' of G(x', y')."""
    if yp <= 2 * y - 1:
        return -(1 - x) * yp * yp / y + (1 - x) * yp + x * y
    c = x / (2 * (1 - y))
    return (c - 2 * (1 - x) / y) * yp * yp / 2 + (1 - c) * yp + x / (4 * (1 - y))


# ---------------------------------------------------------------- circumscribed staircases


def A_upper_components(x, y) -> tuple:
    """(A1, A2): the smallest circumscribed staircase cut in [0, x] and in [x, 1]."""
    x, y = _check_D(x, y)
    a1 = 1 - (1 - y) / (4 * x) if 2 * x >= 1 else 1 - (1 - x) * (1 - y)
    a2 = 1 - (1 - x) / (4 * y) if 2 * y >= 1 else 1 - (1 - x) * (1 - y)
    return a1, a2


def A_upper_star(x, y):
    """A^* = 1 - (1 - x)/(4y) = |K_{x,y}| / delta_L."""
    x, y = _check_D(x, y)
    val = 1 - (1 - x) / (4 * y)
    _agree([val, min(A_upper_components(x, y))], "A^* against the component minimum", tol=1e-9)
    return val


def X_upper_star(x, y):
    """Argmin set of the circumscribed staircase area: a tuple of abscissas, or a
    Continuum (the whole of [0, 1]) for the square."""
    x, y = _check_D(x, y)
    eps = _eps(x, y)
    case = _packing_case(x, y, eps)
    half = Fraction(1, 2) if _exact(x, y) else 0.5
    if case == "SQUARE":
        return Continuum(lambda t: t, 0, 1, "t in [0, 1]")
    if case == "F1":
        return (half, Fraction(3, 2) - 1 / (2 * y) if _exact(y) else 1.5 - 1 / (2 * y))
    if case in ("F2", "F3"):
        return (half,)
    return (1 - (1 - x) / (2 * y),)


# ---------------------------------------------------------------- K_{x,y} as K_f


def fbar(x, y) -> ConvexFunction:
    """The two-piece linear profile with K_fbar = K_{x,y}."""
    x, y = _check_D(x, y)
    x, y = float(x), float(y)
    if x <= 0.0:
        return ConvexFunction("pwl", knots=(0.0, 1.0), values=(1.0, 0.0))
    if x >= 1.0:
        return ConvexFunction("pwl", knots=(0.0, 1.0), values=(1.0, 1.0))
    return ConvexFunction("pwl", knots=(0.0, x, 1.0), values=(1.0, y, 0.0))


def quad_polygon(x, y) -> ConvexPolygon:
    x, y = _check_D(x, y)
    return ConvexPolygon([(0.0, 1.0), (0.0, 0.0), (1.0, 0.0), (float(x), float(y))])


def quad_area(x, y):
    x, y = _check_D(x, y)
    return (x + y) / 2


# ---------------------------------------------------------------- lattice families


@dataclass(frozen=True)
class ParamBranch:
    """One-parameter lattice family t -> generator(t) over an interval."""

    generator: Callable
    lo: float
    hi: float
    description: str
    lo_closed: bool = True
    hi_closed: bool = True

    def interval_text(self) -> str:
        return f"{'[' if self.lo_closed else '('}{self.lo!r}, {self.hi!r}{']' if self.hi_closed else ')'}"

    def sample(self, n: int) -> list:
        return [self.generator(t) for t in sample_interval(self.lo, self.hi, n, self.lo_closed)]


@dataclass(frozen=True)
class LatticeFamily:
    """Finite `members` and/or one-parameter `branches`, with the cardinality of the whole set."""

    cardinality: Cardinality
    members: tuple = ()
    branches: tuple = ()

    def __post_init__(self):
        if self.cardinality is Cardinality.CONTINUUM:
            if not self.branches:
                raise ValueError("a continuum family needs a parameter branch")
        elif len(self.members) != (1 if self.cardinality is Cardinality.ONE else 2) or self.branches:
            raise ValueError("finite family size does not match its cardinality")

    def sample(self, n: int = 5) -> list:
        out = list(self.members)
        for b in self.branches:
            out.extend(b.sample(n))
        return out


def _L(u, v) -> Lattice2:
    return Lattice2((float(u[0]), float(u[1])), (float(v[0]), float(v[1])))


def _square_family() -> LatticeFamily:
    return LatticeFamily(
        Cardinality.CONTINUUM,
        branches=(
            ParamBranch(lambda t: _L((0, 1), (1, t)), 0.0, 1.0, "L((0,1),(1,t))", lo_closed=False),
            ParamBranch(lambda t: _L((t, 1), (1, 0)), 0.0, 1.0, "L((t,1),(1,0))", lo_closed=False),
        ),
    )


def optimal_packing_lattices(x, y) -> LatticeFamily:
    """All lattices attaining delta_L(x, y) for K_{x,y}."""
    x, y = _check_D(x, y)
    eps = _eps(x, y)
    case = _packing_case(x, y, eps)
    if case == "SQUARE":
        return _square_family()
    if case == "F1":
        return LatticeFamily(
            Cardinality.TWO,
            members=(
                _L(((y - 1) / (2 * y), 1), ((3 * y - 1) / (2 * y), 0.5)),
                _L((-0.5, 1), (0.5, (3 * y - 1) / (2 * y))),
            ),
        )
    return LatticeFamily(Cardinality.ONE, members=(_L(((x - 1) / (2 * y), 1), (1 - (1 - x) / (2 * y), 0.5)),))


def closed_form_covering_bases(x, y):
    """The covering lattices exactly as listed by the closed-form case analysis, before
    any cross-check. Returns a LatticeFamily."""
    x, y = _check_D(x, y)
    eps = _eps(x, y)
    case = _covering_case(x, y, eps)
    if case == "SQUARE":
        return _square_family()
    if case == "E1":
        return LatticeFamily(Cardinality.ONE, members=(_L((-1 / 3, 2 * y / (3 * (1 - x))), (1 / 3, y / (3 * (1 - x)))),))
    if case == "E2":
        return LatticeFamily(Cardinality.ONE, members=(_L(((x - 1) / 2, y), (x, y / 2)),))
    if case == "E3":
        den = _third_branch(x, y)[1]
        u = ((y * (1 + y - 2 * x) - 2 * (1 - x) ** 2) / den, ((2 - y) * (1 - x) - y * y) / den)
        v = (x * (2 * (1 - x) - y) / den, y * (2 * (1 - y) - x) / den)
        return LatticeFamily(Cardinality.ONE, members=(_L(u, v),))
    if case == "E4":
        return LatticeFamily(
            Cardinality.TWO,
            members=(_L(((y - 1) / 2, y), (y, y / 2)), _L((-y / 2, (1 + y) / 2), (y / 2, y))),
        )
    return LatticeFamily(
        Cardinality.CONTINUUM,
        branches=(ParamBranch(lambda t: _L((-t / 2, (1 + t) / 2), (1 - t, t)), 1 / 3, 2 / 3, "L((-t/2,(1+t)/2),(1-t,t))"),),
    )


def _lower_lattice(f, x1, x2) -> Lattice2:
    return _L((x1 - x2, f(float(x1))), (x1, f(float(x2))))


def optimal_covering_lattices(x, y) -> LatticeFamily:
    """All lattices attaining theta_L(x, y), built as Lambda_fbar(x1, x2) over the
    argmax set of the inscribed staircase area (see covering_formula_check for the
    comparison against the literal closed-form list)."""
    x, y = _check_D(x, y)
    eps = _eps(x, y)
    if _is_square(x, y, eps):
        return _square_family()
    f = fbar(x, y)
    X = X_lower_star(x, y)
    if isinstance(X, Continuum):
        return LatticeFamily(
            Cardinality.CONTINUUM,
            branches=(
                ParamBranch(
                    lambda t: _lower_lattice(f, *X.point(t)),
                    float(X.lo),
                    float(X.hi),
                    "Lambda_fbar" + X.description,
                ),
            ),
        )
    members = tuple(_lower_lattice(f, x1, x2) for x1, x2 in X)
    return LatticeFamily(Cardinality.ONE if len(members) == 1 else Cardinality.TWO, members=members)


def cardinality(x, y) -> tuple:
    """(|Delta|, |Theta|) cardinality classes."""
    return optimal_packing_lattices(x, y).cardinality, optimal_covering_lattices(x, y).cardinality


@dataclass(frozen=True)
class FormulaCheck:
    x: float
    y: float
    case: str
    agree: bool
    closed_form: tuple
    construction: tuple


def covering_formula_check(x, y, n: int = 5) -> FormulaCheck:
    """Compare the literal closed-form covering bases with the construction
    member by member (sets compared up to order)."""
    x, y = _check_D(x, y)
    lit = closed_form_covering_bases(x, y).sample(n)
    con = optimal_covering_lattices(x, y).sample(n)
    agree = len(lit) == len(con) and all(any(a.same_lattice(b) for b in con) for a in lit) and all(
        any(b.same_lattice(a) for a in lit) for b in con
    )
    return FormulaCheck(float(x), float(y), region_classify(x, y).covering_case, agree, tuple(lit), tuple(con))


# ---------------------------------------------------------------- canonicalization


@dataclass(frozen=True)
class QuadParams:
    """(x, y) in D with the affine map sending the input quadrilateral onto K_{x,y};
    `labeling` gives the input vertices sent to (0,1), (0,0), (1,0), (x,y)."""

    x: object
    y: object
    to_canonical: AffineMap
    labeling: tuple


def _cyclic_order(pts):
    cx = sum(float(p[0]) for p in pts) / len(pts)
    cy = sum(float(p[1]) for p in pts) / len(pts)
    return sorted(pts, key=lambda p: math.atan2(float(p[1]) - cy, float(p[0]) - cx))


def _cross(o, a, b):
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def _snap(v, target, tol):
    return target if abs(v - target) <= tol else v


def canonicalize_quad(vertices) -> QuadParams:
    """Affine normal form of a convex quadrilateral given in any vertex order.

    Of the eight labelings (four corners, two orientations) that send three
    consecutive vertices onto (0,1), (0,0), (1,0), those whose fourth vertex
    lands in D (within 1e-9) are kept and the lexicographically smallest (x, y)
    is returned. A collinear triple (a triangle) is accepted and lands on the
    edge x + y = 1.
    """
    pts = [tuple(as_number(c) for c in p) for p in vertices]
    if len(pts) != 4 or any(len(p) != 2 for p in pts):
        raise InvalidQuadError("need exactly four (x, y) vertices")
    for i in range(4):
        for j in range(i):
            if all(abs(float(a) - float(b)) <= 1e-12 for a, b in zip(pts[i], pts[j])):
                raise InvalidQuadError(f"repeated vertex {pts[i]}")
    exact = all(_exact(*p) for p in pts)
    ring = _cyclic_order(pts)
    scale = max(max(abs(float(c)) for p in pts for c in p), 1.0) ** 2
    turns = [_cross(ring[i - 1], ring[i], ring[(i + 1) % 4]) for i in range(4)]
    if any(float(t) < -1e-12 * scale for t in turns):
        raise InvalidQuadError("vertices are not in convex position")
    if sum(1 for t in turns if abs(float(t)) <= 1e-12 * scale) > 1:
        raise InvalidQuadError("fewer than three non-collinear vertices")
    tol = 0 if exact else CANON_TOL
    best = None
    for i in range(4):
        b, d = ring[i], ring[(i + 2) % 4]
        for a, c in ((ring[i - 1], ring[(i + 1) % 4]), (ring[(i + 1) % 4], ring[i - 1])):
            e1 = (c[0] - b[0], c[1] - b[1])
            e2 = (a[0] - b[0], a[1] - b[1])
            det = e1[0] * e2[1] - e1[1] * e2[0]
            if abs(float(det)) <= 1e-12 * scale:
                continue
            lin = ((e2[1] / det, -e2[0] / det), (-e1[1] / det, e1[0] / det))
            shift = (-(lin[0][0] * b[0] + lin[0][1] * b[1]), -(lin[1][0] * b[0] + lin[1][1] * b[1]))
            M = AffineMap(lin, shift)
            x, y = M(d)
            if not in_D(x, y, tol):
                continue
            if not exact:
                x, y = _snap(x, 0.0, tol), _snap(y, 1.0, tol)
                if abs(x - y) <= tol:
                    x = y = max(x, y)
                if abs(x + y - 1.0) <= tol:
                    x = 1.0 - y
                x, y = min(max(x, 0.0), 1.0), min(max(y, 0.0), 1.0)
            cand = QuadParams(x, y, M, (a, b, c, d))
            if best is None or (x, y) < (best.x, best.y):
                best = cand
    if best is None:
        raise InvalidQuadError("no labeling lands in D; the quadrilateral is degenerate")
    return best
