"""Property-based checks of geometric and density invariants."""

import math

import numpy as np
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from latticeq import quad as Q
from latticeq.geometry import AffineMap, ConvexPolygon, Lattice2, affine_apply, intersection_area, staircase_lower, staircase_upper
from latticeq.kf import covering_lattice_from_pair, packing_lattice_from_x

unit = st.floats(min_value=0.0, max_value=1.0, allow_nan=False)
coef = st.floats(min_value=-3.0, max_value=3.0, allow_nan=False, allow_infinity=False)


@st.composite
def points_in_D(draw):
    y = draw(st.floats(min_value=0.5, max_value=1.0))
    x = draw(st.floats(min_value=1.0 - y, max_value=y))
    assume(Q.in_D(x, y))
    return x, y


@st.composite
def convex_polygons(draw):
    n = draw(st.integers(min_value=3, max_value=8))
    angles = sorted(draw(st.lists(st.floats(0, 2 * math.pi), min_size=n, max_size=n, unique=True)))
    r = draw(st.floats(0.2, 2.0))
    cx, cy = draw(coef), draw(coef)
    pts = [(cx + r * math.cos(a), cy + r * math.sin(a)) for a in angles]
    try:
        return ConvexPolygon(pts)
    except Exception:
        assume(False)


@st.composite
def affine_maps(draw):
    m = [[draw(coef) for _ in range(2)] for _ in range(2)]
    assume(abs(m[0][0] * m[1][1] - m[0][1] * m[1][0]) > 0.1)
    return AffineMap(((m[0][0], m[0][1]), (m[1][0], m[1][1])), (draw(coef), draw(coef)))


@given(convex_polygons(), convex_polygons())
def test_intersection_bounded_and_symmetric(P, Q_):
    a = intersection_area(P, Q_)
    assert -1e-12 <= a <= min(P.area, Q_.area) + 1e-9
    assert math.isclose(a, intersection_area(Q_, P), abs_tol=1e-9)


@given(convex_polygons())
def test_self_intersection_is_area(P):
    assert math.isclose(intersection_area(P, P), P.area, rel_tol=1e-9)


@given(convex_polygons(), affine_maps())
def test_affine_scales_area_by_determinant(P, M):
    assert math.isclose(affine_apply(M, P).area, abs(M.det) * P.area, rel_tol=1e-7)


@given(points_in_D())
def test_density_bounds(p):
    x, y = p
    assert 2 / 3 - 1e-12 <= Q.delta_L(x, y) <= 1 + 1e-12
    assert 1 - 1e-12 <= Q.theta_L(x, y) <= 1.5 + 1e-12
    assert Q.delta_L(x, y) * Q.theta_L(x, y) >= 1 - 1e-9


@given(points_in_D())
def test_theta_is_area_over_best_staircase(p):
    x, y = p
    f = Q.fbar(x, y)
    A = Q.A_lower_star(x, y)
    ts = np.linspace(0, 1, 201)
    F = f(ts)
    grid = max(ts[i] * F[i] + (ts[j] - ts[i]) * F[j] for i in range(0, 201, 4) for j in range(i, 201, 4))
    assert grid <= A + 1e-12


@given(points_in_D(), unit)
def test_upper_staircase_area_at_least_A_star(p, t):
    x, y = p
    f = Q.fbar(x, y)
    assert staircase_upper(f, t).area >= Q.A_upper_star(x, y) - 1e-12


@given(points_in_D(), unit, unit)
def test_staircase_lattices_have_staircase_determinants(p, s, t):
    x, y = p
    f = Q.fbar(x, y)
    x1, x2 = min(s, t), max(s, t)
    assume(x2 - x1 > 1e-6 and x1 > 1e-6)
    assert math.isclose(covering_lattice_from_pair(f, x1, x2).covolume, staircase_lower(f, x1, x2).area, abs_tol=1e-12)
    assert math.isclose(packing_lattice_from_x(f, s).covolume, staircase_upper(f, s).area, abs_tol=1e-12)


@settings(max_examples=50)
@given(points_in_D(), affine_maps(), st.permutations(range(4)))
def test_canonicalization_inverts_affine_maps(p, M, perm):
    x, y = p
    assume(x + y > 1 + 1e-6)
    verts = [(0, 1), (0, 0), (1, 0), (x, y)]
    img = [M(verts[k]) for k in perm]
    c = Q.canonicalize_quad(img)
    assert abs(c.x - x) < 1e-7 and abs(c.y - y) < 1e-7


@given(st.tuples(coef, coef), st.tuples(coef, coef), st.integers(-5, 5))
def test_reduction_preserves_lattice(u, v, k):
    assume(abs(u[0] * v[1] - u[1] * v[0]) > 1e-2)
    L = Lattice2(u, v)
    R = Lattice2(u, (v[0] + k * u[0], v[1] + k * u[1])).reduced()
    assert R.same_lattice(L, tol=1e-7)
    assert math.isclose(R.covolume, L.covolume, rel_tol=1e-9)
