"""Closed forms for K_{x,y}, checked against brute-force staircase grids and
exact rational arithmetic."""

import random
from fractions import Fraction

import numpy as np
import pytest

from latticeq import DomainError, InvalidQuadError
from latticeq import quad as Q
from latticeq.geometry import AffineMap, Lattice2
from conftest import sample_D


def fbar_np(x, y):
    return lambda t: np.interp(t, [0, x, 1], [1, y, 0]) if x > 0 else 1 - t


def brute_lower(x, y, n=1201, box=None):
    """max over a grid of x1 f(x1) + (x2 - x1) f(x2), optionally with x1, x2 in given intervals."""
    f = fbar_np(x, y)
    ts = np.linspace(0, 1, n)
    ts = np.union1d(ts, [x, (1 + x) / 2, 1 / 3, 2 / 3])
    F = f(ts)
    psi = ts[:, None] * F[:, None] + (ts[None, :] - ts[:, None]) * F[None, :]
    ok = ts[:, None] <= ts[None, :]
    if box is not None:
        (a1, b1), (a2, b2) = box
        ok &= (ts[:, None] >= a1) & (ts[:, None] <= b1) & (ts[None, :] >= a2) & (ts[None, :] <= b2)
    return float(np.max(np.where(ok, psi, -np.inf)))


def brute_upper(x, y, n=100_001):
    f = fbar_np(x, y)
    ts = np.union1d(np.linspace(0, 1, n), [0.5, 1 - (1 - x) / (2 * y)])
    return float(np.min(ts + (1 - ts) * f(ts)))


# ---------------------------------------------------------------- densities


def test_triangle_exact():
    h = Fraction(1, 2)
    assert Q.delta_L(h, h) == Fraction(2, 3)
    assert Q.theta_L(h, h) == Fraction(3, 2)


@pytest.mark.parametrize(
    "x, y, delta",
    [(1.0, 1.0, 1.0), (0.5, 0.5, 2 / 3), (0.6, 0.8, 0.8)],
)
def test_delta_examples(x, y, delta):
    assert Q.delta_L(x, y) == pytest.approx(delta, abs=1e-12)


@pytest.mark.parametrize(
    "x, y, theta",
    [(0.5, 0.5, 1.5), (0.6, 0.8, 1.25), (0.2, 0.9, 1.4666666666666667), (0.55, 0.6, 1.4238095238095238), (1.0, 1.0, 1.0)],
)
def test_theta_examples(x, y, theta):
    assert Q.theta_L(x, y) == pytest.approx(theta, abs=1e-12)


@pytest.mark.parametrize("fun", [Q.delta_L, Q.theta_L, Q.region_classify, Q.A_lower_star, Q.A_upper_star])
@pytest.mark.parametrize("x, y", [(0.6, 0.3), (0.2, 0.5), (0.8, 0.7), (1.1, 1.0), (-0.1, 1.0)])
def test_outside_D_rejected(fun, x, y):
    with pytest.raises(DomainError):
        fun(x, y)


def test_densities_against_staircase_grids(rng):
    for x, y in sample_D(rng, 40) + [(0.2, 0.9), (0.55, 0.6), (0.7, 0.7), (1 / 3, 0.8)]:
        area = (x + y) / 2
        assert area / Q.A_upper_star(x, y) == pytest.approx(Q.delta_L(x, y), abs=1e-12)
        assert Q.A_upper_star(x, y) == pytest.approx(brute_upper(x, y), abs=1e-9)
        A_lo = Q.A_lower_star(x, y)
        assert area / A_lo == pytest.approx(Q.theta_L(x, y), abs=1e-12)
        # the closed form is an attained value, so it dominates any grid value
        grid = brute_lower(x, y)
        assert grid <= A_lo + 1e-12
        assert A_lo - grid < 2e-5


def test_universal_bounds(rng):
    for x, y in sample_D(rng, 300):
        assert 2 / 3 - 1e-12 <= Q.delta_L(x, y) <= 1 + 1e-12
        assert 1 - 1e-12 <= Q.theta_L(x, y) <= 1.5 + 1e-12


@pytest.mark.parametrize("y", [2 / 3, 0.75, 0.9, 1.0])
def test_theta_branches_agree_at_x_one_third(y):
    left = Q.theta_L(1 / 3 - 1e-13, y)
    right = Q.theta_L(1 / 3 + 1e-13, y)
    assert left == pytest.approx(right, abs=1e-11)


@pytest.mark.parametrize("x", [1 / 3, 0.4, 0.5, 0.6, 2 / 3 - 1e-9])
def test_theta_branches_agree_at_y_two_thirds(x):
    y = 2 / 3
    assert Q.theta_L(x, y - 1e-13) == pytest.approx(Q.theta_L(x, y), abs=1e-11)


def test_exact_arithmetic_on_branch_boundaries():
    third = Fraction(1, 3)
    for x, y in [(third, Fraction(2, 3)), (third, Fraction(5, 6)), (Fraction(1, 2), Fraction(2, 3)), (Fraction(2, 3), Fraction(2, 3))]:
        t = Q.theta_L(x, y)
        assert isinstance(t, Fraction)
        assert t == (x + y) / 2 / Q.A_lower_star(x, y)


# ---------------------------------------------------------------- regions


@pytest.mark.parametrize(
    "x, y, coarse, cov, pack",
    [
        (0.2, 0.9, "B1", "E1", "F4"),
        (0.6, 0.8, "B2", "E2", "F4"),
        (0.55, 0.6, "B3", "E3", "F4"),
        (0.7, 0.7, "B2", "E4", "F1"),
        (2 / 3, 2 / 3, "B2", "E5", "F1"),
        (0.5, 0.5, "B3", "E3", "F3"),
        (0.3, 0.7, "B1", "E1", "F2"),
        (1.0, 1.0, "B2", "SQUARE", "SQUARE"),
    ],
)
def test_region_classify(x, y, coarse, cov, pack):
    tag = Q.region_classify(x, y)
    assert (tag.coarse, tag.covering_case, tag.packing_case) == (coarse, cov, pack)


def test_coarse_boundary_convention():
    assert Q.region_classify(Fraction(1, 3), Fraction(5, 6)).coarse == "B1"
    assert Q.region_classify(0.34, Fraction(2, 3)).coarse == "B2"


# ---------------------------------------------------------------- staircase components


def test_lower_components_examples():
    a12, a11, a22 = Q.A_lower_components(0.6, 0.8)
    assert (a12, a11, a22) == (pytest.approx(0.56), pytest.approx(0.51), pytest.approx(0.56))
    assert Q.A_lower_components(0.2, 0.9)[2] == pytest.approx(0.375)
    assert Q.A_lower_components(0.5, 0.5)[0] == pytest.approx(1 / 3)
    with pytest.raises(DomainError):
        Q.A_lower_components(1, 1)


def test_lower_components_against_restricted_grids(rng):
    for x, y in sample_D(rng, 15, margin=0.02):
        a12, a11, a22 = Q.A_lower_components(x, y)
        assert a12 == pytest.approx(brute_lower(x, y, box=((0, x), (x, 1))), abs=3e-5)
        assert a11 == pytest.approx(brute_lower(x, y, box=((0, x), (0, x))), abs=3e-5)
        assert a22 == pytest.approx(brute_lower(x, y, box=((x, 1), (x, 1))), abs=3e-5)
        assert max(a12, a11, a22) <= (x + y) / 2


def test_G_g_consistency(rng):
    for x, y in sample_D(rng, 10, margin=0.05):
        for yp in np.linspace(0, y, 7):
            xs = np.linspace(0, x, 20001)
            assert Q.g(x, y, yp) == pytest.approx(float(np.max(Q.G(x, y, xs, yp))), abs=1e-8)


@pytest.mark.parametrize(
    "x, y, A, X",
    [
        (0.2, 0.9, 0.375, [(1 / 3, 2 / 3)]),
        (0.6, 0.8, 0.56, [(0.6, 0.8)]),
        (0.7, 0.7, 0.5425, [(0.35, 0.7), (0.7, 0.85)]),
    ],
)
def test_X_lower_star_examples(x, y, A, X):
    assert Q.A_lower_star(x, y) == pytest.approx(A, abs=1e-12)
    got = sorted(Q.X_lower_star(x, y))
    assert got == [pytest.approx(p, abs=1e-12) for p in X]
    f = fbar_np(x, y)
    for x1, x2 in got:
        assert x1 * f(x1) + (x2 - x1) * f(x2) == pytest.approx(A, abs=1e-12)


def test_X_lower_star_continuum():
    X = Q.X_lower_star(2 / 3, 2 / 3)
    assert isinstance(X, Q.Continuum)
    assert Q.A_lower_star(2 / 3, 2 / 3) == pytest.approx(0.5)
    f = fbar_np(2 / 3, 2 / 3)
    for x1, x2 in X.sample(7):
        assert x1 * f(x1) + (x2 - x1) * f(x2) == pytest.approx(0.5, abs=1e-12)


def test_X_lower_star_E3_attains_maximum(rng):
    for x, y in [(0.55, 0.6), (0.45, 0.6), (0.6, 0.62)]:
        (x1, x2), = Q.X_lower_star(x, y)
        f = fbar_np(x, y)
        assert x1 * f(x1) + (x2 - x1) * f(x2) == pytest.approx(Q.A_lower_star(x, y), abs=1e-12)


@pytest.mark.parametrize(
    "x, y, A, X",
    [(0.6, 0.8, 0.875, (0.75,)), (0.9, 0.9, None, (0.5, 1.5 - 1 / 1.8)), (0.5, 0.5, 0.75, (0.5,))],
)
def test_X_upper_star_examples(x, y, A, X):
    if A is not None:
        assert Q.A_upper_star(x, y) == pytest.approx(A, abs=1e-12)
    got = Q.X_upper_star(x, y)
    assert got == pytest.approx(X, abs=1e-12)
    f = fbar_np(x, y)
    for t in got:
        assert t + (1 - t) * f(t) == pytest.approx(Q.A_upper_star(x, y), abs=1e-12)


# ---------------------------------------------------------------- lattice families


def test_packing_family_examples():
    fam = Q.optimal_packing_lattices(0.6, 0.8)
    assert fam.cardinality is Q.Cardinality.ONE
    assert fam.members[0].same_lattice(Lattice2((-0.25, 1), (0.75, 0.5)))
    assert fam.members[0].covolume == pytest.approx(0.875)
    assert Q.optimal_packing_lattices(0.9, 0.9).cardinality is Q.Cardinality.TWO
    sq = Q.optimal_packing_lattices(1, 1)
    assert sq.cardinality is Q.Cardinality.CONTINUUM
    assert len(sq.branches) == 2
    assert all(not b.lo_closed and b.hi_closed for b in sq.branches)


def test_covering_family_examples():
    fam = Q.optimal_covering_lattices(0.6, 0.8)
    assert fam.members[0].same_lattice(Lattice2((-0.2, 0.8), (0.6, 0.4)))
    assert fam.members[0].covolume == pytest.approx(0.56)
    fam = Q.optimal_covering_lattices(0.2, 0.9)
    assert fam.members[0].same_lattice(Lattice2((-1 / 3, 0.75), (1 / 3, 0.375)))
    fam = Q.optimal_covering_lattices(2 / 3, 2 / 3)
    assert fam.cardinality is Q.Cardinality.CONTINUUM
    (branch,) = fam.branches
    assert (branch.lo, branch.hi) == pytest.approx((1 / 3, 2 / 3))
    for t in (1 / 3, 0.5, 2 / 3):
        expect = Lattice2((-t / 2, (1 + t) / 2), (1 - t, t))
        assert branch.generator(t).same_lattice(expect)


def test_family_determinants_match_staircase_areas(rng):
    for x, y in sample_D(rng, 60) + [(0.7, 0.7), (2 / 3, 2 / 3), (0.5, 0.5), (1.0, 1.0)]:
        for L in Q.optimal_packing_lattices(x, y).sample(5):
            assert L.covolume == pytest.approx(Q.A_upper_star(x, y), abs=1e-10)
        for L in Q.optimal_covering_lattices(x, y).sample(5):
            assert L.covolume == pytest.approx(Q.A_lower_star(x, y), abs=1e-10)


@pytest.mark.parametrize(
    "x, y, pack, cover",
    [
        (1.0, 1.0, "Continuum", "Continuum"),
        (0.8, 0.8, "Two", "Two"),
        (2 / 3, 2 / 3, "Two", "Continuum"),
        (0.5, 0.5, "One", "One"),
        (0.6, 0.8, "One", "One"),
    ],
)
def test_cardinality(x, y, pack, cover):
    p, c = Q.cardinality(x, y)
    assert (p.value, c.value) == (pack, cover)


def test_literal_and_constructed_covering_bases_agree_off_third_branch(rng):
    for x, y in [p for p in sample_D(rng, 100) if 3 * p[1] >= 2]:
        assert Q.covering_formula_check(x, y).agree, (x, y)


def test_literal_third_branch_basis_differs_but_construction_covers():
    check = Q.covering_formula_check(0.55, 0.6)
    assert check.case == "E3"
    assert not check.agree
    (lit,) = check.closed_form
    (con,) = check.construction
    # the literal basis is off by (x - y)(1 - x - y)/den in its first component
    x, y = 0.55, 0.6
    den = 4 * (1 - x) * (1 - y) - x * y
    (x1, x2), = Q.X_lower_star(x, y)
    assert lit.u[0] - (x1 - x2) == pytest.approx((x - y) * (1 - x - y) / den, abs=1e-12)
    assert con.covolume == pytest.approx(Q.A_lower_star(x, y), abs=1e-12)


def test_literal_third_branch_agrees_on_the_diagonal_and_triangle_edge():
    # the discrepancy factor (x - y)(1 - x - y) vanishes on both edges
    for x, y in [(0.5, 0.5), (0.6, 0.6), (0.4, 0.6)]:
        assert Q.covering_formula_check(x, y).agree or Q.region_classify(x, y).covering_case != "E3"


# ---------------------------------------------------------------- canonicalization


def test_canonical_identity():
    p = Q.canonicalize_quad([(0, 1), (0, 0), (1, 0), (0.6, 0.8)])
    assert (p.x, p.y) == pytest.approx((0.6, 0.8), abs=1e-12)
    M = p.to_canonical
    for a, b in [((0, 1), (0, 1)), ((0.6, 0.8), (0.6, 0.8))]:
        assert M(a) == pytest.approx(b, abs=1e-12)


def test_canonical_square():
    p = Q.canonicalize_quad([(0, 0), (1, 0), (1, 1), (0, 1)])
    assert (p.x, p.y) == pytest.approx((1.0, 1.0))


def test_canonical_affine_image():
    M = AffineMap(((2, 1), (0, 1)), (3, -1))
    pts = [M(v) for v in [(0, 1), (0, 0), (1, 0), (0.6, 0.8)]]
    random.Random(3).shuffle(pts)
    p = Q.canonicalize_quad(pts)
    assert (p.x, p.y) == pytest.approx((0.6, 0.8), abs=1e-12)
    for v, img in zip(p.labeling, [(0, 1), (0, 0), (1, 0), (p.x, p.y)]):
        assert p.to_canonical(v) == pytest.approx(img, abs=1e-12)


def test_canonical_exact_input():
    pts = [(Fraction(3), Fraction(0)), (Fraction(5), Fraction(1)), (Fraction(4), Fraction(2)), (Fraction(3), Fraction(1))]
    p = Q.canonicalize_quad(pts)
    assert isinstance(p.x, Fraction) and Q.in_D(p.x, p.y, 0)


def test_canonical_triangle_lands_on_edge():
    p = Q.canonicalize_quad([(0, 1), (0, 0), (1, 0), (0.5, 0.5)])
    assert p.x + p.y == pytest.approx(1.0, abs=1e-12)
    assert (p.x, p.y) == pytest.approx((0.5, 0.5))


@pytest.mark.parametrize(
    "pts",
    [
        [(0, 0), (1, 0), (0.2, 0.2), (0, 1)],  # non-convex
        [(0, 0), (1, 0), (1, 0), (0, 1)],  # repeated vertex
        [(0, 0), (1, 0), (2, 0), (3, 0)],  # collinear
        [(0, 0), (1, 0), (0, 1)],
    ],
)
def test_canonical_rejects_bad_input(pts):
    with pytest.raises(InvalidQuadError):
        Q.canonicalize_quad(pts)


def test_self_intersecting_order_is_repaired():
    # vertices given in bow-tie order still describe a convex quadrilateral
    p = Q.canonicalize_quad([(0, 0), (1, 1), (1, 0), (0, 1)])
    assert (p.x, p.y) == pytest.approx((1.0, 1.0))
