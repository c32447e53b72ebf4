import pytest

from latticeq import DomainError
from latticeq import quad as Q
from latticeq.geometry import ConvexPolygon, Lattice2, staircase_lower, staircase_upper
from latticeq.kf import covering_lattice_from_pair, packing_lattice_from_x
from latticeq.verify import (
    MIN_GRID,
    default_tol,
    overlap_area,
    verify_covering,
    verify_packing,
    verify_tiling,
    window_radius,
)

SQUARE = ConvexPolygon([(0, 0), (1, 0), (1, 1), (0, 1)])
K68 = Q.quad_polygon(0.6, 0.8)


def test_square_packing():
    c = verify_packing(SQUARE, Lattice2((0, 1), (1, 0)))
    assert c.ok and c.max_overlap_area == 0 and c.density == 1


def test_square_overlapping_packing():
    c = verify_packing(SQUARE, Lattice2((0, 0.9), (1, 0)))
    assert not c.ok
    assert c.max_overlap_area == pytest.approx(0.1, abs=1e-12)


def test_quad_packing():
    c = verify_packing(K68, Lattice2((-0.25, 1), (0.75, 0.5)))
    assert c.ok and c.density == pytest.approx(0.8, abs=1e-12)


def test_square_covering():
    c = verify_covering(SQUARE, Lattice2((0, 1), (1, 0)))
    assert c.ok and c.uncovered_fraction == 0 and c.density == 1


def test_square_gappy_covering():
    c = verify_covering(SQUARE, Lattice2((0, 1.1), (1, 0)))
    assert not c.ok
    # gap strips of height 0.1 per period 1.1; on the 512 grid this is 46/512
    assert c.uncovered_fraction == pytest.approx(1 / 11, abs=2e-3)
    assert 1.0 < c.worst_point.y < 1.1  # deepest point sits in the gap strip


def test_quad_covering():
    c = verify_covering(Q.quad_polygon(0.2, 0.9), Lattice2((-1 / 3, 0.75), (1 / 3, 0.375)))
    assert c.ok
    assert c.density == pytest.approx(1.4666666666666667, abs=1e-12)


def test_shrunk_covering_fails():
    # 2% denser than optimal is too sparse to cover
    L = Lattice2((-0.2, 0.8), (0.6, 0.4)).scaled(1.01)
    assert not verify_covering(K68, L).ok


def test_enlarged_packing_fails():
    L = Lattice2((-0.25, 1), (0.75, 0.5)).scaled(0.99)
    assert not verify_packing(K68, L).ok


@pytest.mark.parametrize(
    "K, L",
    [
        (staircase_lower(Q.fbar(0.6, 0.8), 0.6, 0.8), covering_lattice_from_pair(Q.fbar(0.6, 0.8), 0.6, 0.8)),
        (staircase_upper(Q.fbar(0.6, 0.8), 0.75), packing_lattice_from_x(Q.fbar(0.6, 0.8), 0.75)),
        (SQUARE, Lattice2((0, 1), (1, 0))),
    ],
)
def test_tilings(K, L):
    c = verify_tiling(K, L)
    assert c.ok and c.det_matches_area
    assert c.density == pytest.approx(1.0, abs=1e-12)


def test_tiling_requires_matching_determinant():
    c = verify_tiling(SQUARE, Lattice2((0, 1), (0.5, 0)))
    assert not c.ok and not c.det_matches_area


def test_degenerate_inputs():
    with pytest.raises(DomainError):
        verify_covering(SQUARE, Lattice2((0, 1), (1, 0)), grid_n=MIN_GRID - 1)
    with pytest.raises(DomainError):
        verify_packing(SQUARE, ((0, 1), (1, 0)))


def test_window_covers_every_overlap():
    # brute force over a much larger index range finds nothing the window missed
    L = Lattice2((0.05, 1.0), (0.7, 0.03))
    R = L.reduced()
    r = window_radius(K68, L)
    for i in range(-3 * r, 3 * r + 1):
        for j in range(-3 * r, 3 * r + 1):
            if max(abs(i), abs(j)) > r:
                assert overlap_area(K68, R.point(i, j)) == 0.0


def test_covering_is_basis_independent():
    L = Lattice2((-0.2, 0.8), (0.6, 0.4))
    skew = Lattice2((-0.2 + 5 * 0.6, 0.8 + 5 * 0.4), (0.6, 0.4))
    assert verify_covering(K68, skew).ok


def test_tolerance_env_override(monkeypatch):
    monkeypatch.setenv("LATTICEQ_TOL", "1e-6")
    assert default_tol() == 1e-6
    c = verify_packing(SQUARE, Lattice2((0, 1 - 1e-7), (1, 0)))
    assert c.ok and c.tol == 1e-6
    monkeypatch.setenv("LATTICEQ_TOL", "-1")
    with pytest.raises(DomainError):
        default_tol()
    monkeypatch.setenv("LATTICEQ_TOL", "abc")
    with pytest.raises(DomainError):
        default_tol()


def test_covering_sample_count_and_worst_point():
    L = Lattice2((0, 1.2), (1, 0))
    c = verify_covering(SQUARE, L, grid_n=100)
    # samples at heights 1.2 k / 100; those above 1 are k = 84, ..., 99
    oracle = sum(1 for k in range(100) if 1.2 * k / 100 > 1 + 1e-9) / 100
    assert oracle == 0.16
    assert c.uncovered_fraction == pytest.approx(oracle, abs=1e-15)
    assert c.worst_point.y == pytest.approx(1.1, abs=0.013)
