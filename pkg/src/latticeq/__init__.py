"""Exact and numerical lattice packing/covering densities for convex quadrilaterals
and staircase-bounded convex disks K_f, with a brute-force certificate verifier."""

__version__ = "0.1.0"

from .errors import DomainError, InvalidQuadError, ValidationError
from .geometry import (
    AffineMap,
    ConvexPolygon,
    Lattice2,
    Point2,
    StaircasePolygon,
    affine_apply,
    convex_intersection,
    polygon_area,
    staircase_lower,
    staircase_upper,
)
from .profiles import ConvexFunction, area_under, make_convex_function, parse_profile
from .kf import (
    KfReport,
    covering_lattice_from_pair,
    kf_densities,
    maximize_lower_area,
    minimize_upper_area,
    packing_lattice_from_x,
)
from .quad import (
    LatticeFamily,
    QuadParams,
    RegionTag,
    canonicalize_quad,
    delta_L,
    optimal_covering_lattices,
    optimal_packing_lattices,
    region_classify,
    theta_L,
)
from .verify import Certificate, verify_covering, verify_packing, verify_tiling

__all__ = [
    "AffineMap",
    "Certificate",
    "ConvexFunction",
    "ConvexPolygon",
    "DomainError",
    "InvalidQuadError",
    "KfReport",
    "Lattice2",
    "LatticeFamily",
    "Point2",
    "QuadParams",
    "RegionTag",
    "StaircasePolygon",
    "ValidationError",
    "affine_apply",
    "area_under",
    "canonicalize_quad",
    "convex_intersection",
    "covering_lattice_from_pair",
    "delta_L",
    "kf_densities",
    "make_convex_function",
    "maximize_lower_area",
    "minimize_upper_area",
    "optimal_covering_lattices",
    "optimal_packing_lattices",
    "packing_lattice_from_x",
    "parse_profile",
    "polygon_area",
    "region_classify",
    "staircase_lower",
    "staircase_upper",
    "theta_L",
    "verify_covering",
    "verify_packing",
    "verify_tiling",
]
