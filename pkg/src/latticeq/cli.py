"""Command-line interface: ``latticeq quad|kf|verify|scan``.

Every invocation prints one JSON document on standard output. Exit codes:
0 success, 1 a certificate or inequality check failed, 2 invalid input.
"""

from __future__ import annotations

import argparse
import math
import os
import sys
from fractions import Fraction

from . import quad as Q
from . import scan as S
from .errors import LatticeqError
from .geometry import ConvexPolygon, Lattice2
from .kf import (
    LOWER_GRID,
    UPPER_GRID,
    inner_polygon,
    kf_densities,
    pair_margins,
    outer_polygon,
    reciprocal_sum,
)
from .profiles import make_convex_function
from .report import dumps, envelope, lattice_doc
from .verify import DEFAULT_GRID, Certificate, default_tol, verify_covering, verify_packing, verify_tiling

EXIT_OK, EXIT_FAIL, EXIT_INPUT = 0, 1, 2
DENSITY_TOL = 1e-9


class InputError(LatticeqError):
    pass


# ---------------------------------------------------------------- parsing


def parse_number(text: str, exact: bool):
    text = text.strip()
    try:
        if exact or "/" in text:
            return Fraction(text)
        v = float(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise InputError(f"not a number: {text!r}") from exc
    if not math.isfinite(v):
        raise InputError(f"not a finite number: {text!r}")
    return v


def parse_points(text: str, exact: bool = False) -> list:
    """``"x0,y0;x1,y1;..."`` (or one ``x,y`` per line) into a list of pairs."""
    items = [s for s in text.replace("\n", ";").split(";") if s.strip()]
    pts = []
    for item in items:
        parts = item.split(",")
        if len(parts) != 2:
            raise InputError(f"expected 'x,y', got {item.strip()!r}")
        pts.append(tuple(parse_number(p, exact) for p in parts))
    return pts


def parse_polygon_arg(text: str) -> list:
    if os.path.isfile(text):
        with open(text, encoding="utf-8") as fh:
            return parse_points(fh.read())
    return parse_points(text)


def parse_lattice(text: str) -> Lattice2:
    pts = parse_points(text)
    if len(pts) != 2:
        raise InputError("lattice needs exactly two basis vectors 'ux,uy;vx,vy'")
    return Lattice2(pts[0], pts[1])


def _tolerances(args) -> dict:
    return {"certification": default_tol(), "density_match": DENSITY_TOL, "grid": getattr(args, "grid", None)}


# ---------------------------------------------------------------- output pieces


def cert_doc(c: Certificate, expected=None, lattice=None) -> dict:
    doc = {
        "mode": c.mode,
        "ok": c.ok,
        "density": c.density,
        "window_radius": c.window_radius,
        "grid_resolution": c.grid_resolution,
        "max_overlap_area": c.max_overlap_area,
        "uncovered_fraction": c.uncovered_fraction,
        "worst_point": None if c.worst_point is None else [c.worst_point.x, c.worst_point.y],
    }
    if c.det_matches_area is not None:
        doc["det_matches_area"] = c.det_matches_area
    if expected is not None:
        doc["expected_density"] = float(expected)
        doc["density_matches"] = abs(c.density - float(expected)) <= DENSITY_TOL
    if lattice is not None:
        doc["lattice"] = lattice_doc(lattice)
    return doc


def _passed(doc) -> bool:
    return doc["ok"] and doc.get("density_matches", True)


def family_doc(fam: Q.LatticeFamily, samples: int) -> dict:
    branches = []
    for b in fam.branches:
        ts = Q.sample_interval(b.lo, b.hi, samples, b.lo_closed)
        branches.append(
            {
                "generator": b.description,
                "interval": b.interval_text(),
                "samples": [{"t": float(t), "lattice": lattice_doc(b.generator(t))} for t in ts],
            }
        )
    return {
        "cardinality": fam.cardinality.value,
        "members": [lattice_doc(L) for L in fam.members],
        "branches": branches,
    }


def _exact_text(v):
    return str(v) if isinstance(v, (int, Fraction)) else None


# ---------------------------------------------------------------- commands


def cmd_quad(args):
    if args.vertices is not None:
        params = Q.canonicalize_quad(parse_points(args.vertices, args.exact))
        x, y = params.x, params.y
        inputs = {"vertices": args.vertices, "exact": args.exact}
    else:
        if args.x is None or args.y is None:
            raise InputError("give --x and --y, or --vertices")
        x, y = parse_number(args.x, args.exact), parse_number(args.y, args.exact)
        inputs = {"x": args.x, "y": args.y, "exact": args.exact}
    tag = Q.region_classify(x, y)
    d, t = Q.delta_L(x, y), Q.theta_L(x, y)
    pack = Q.optimal_packing_lattices(x, y)
    cover = Q.optimal_covering_lattices(x, y)
    results = {
        "x": float(x),
        "y": float(y),
        "region": {"coarse": tag.coarse, "covering_case": tag.covering_case, "packing_case": tag.packing_case},
        "area": float(Q.quad_area(x, y)),
        "delta": float(d),
        "theta": float(t),
        "A_upper": float(Q.A_upper_star(x, y)),
        "A_lower": float(Q.A_lower_star(x, y)),
        "packing": family_doc(pack, args.samples),
        "covering": family_doc(cover, args.samples),
    }
    if _exact_text(d) is not None:
        results["exact"] = {"x": str(x), "y": str(y), "delta": str(d), "theta": str(t)}
    check = Q.covering_formula_check(x, y, args.samples)
    results["covering_formula_check"] = {"case": check.case, "agree": check.agree}
    ok = True
    if args.certify:
        K = Q.quad_polygon(x, y)
        tol = default_tol()
        certs = []
        for L in pack.sample(args.samples):
            certs.append(cert_doc(verify_packing(K, L, tol), d, L))
        for L in cover.sample(args.samples):
            certs.append(cert_doc(verify_covering(K, L, args.grid, tol), t, L))
        results["certificates"] = certs
        ok = all(_passed(c) for c in certs)
        if not check.agree:
            results["covering_formula_check"]["closed_form_certificates"] = [
                cert_doc(verify_covering(K, L, args.grid, tol), t, L) for L in check.closed_form
            ]
    return envelope("quad", args.argv, inputs, results, _tolerances(args), ok), ok


def cmd_kf(args):
    f = make_convex_function(args.f)
    grid_lower = args.grid or LOWER_GRID
    rep = kf_densities(f, grid_lower, args.grid_upper or UPPER_GRID)
    x1, x2 = rep.x_pair_lower.best
    results = {
        "profile": f.spec_text(),
        "area_K": rep.area_K,
        "A_upper": rep.A_upper,
        "A_lower": rep.A_lower,
        "delta": rep.delta,
        "theta": rep.theta,
        "reciprocal_sum": reciprocal_sum(rep),
        "argmin_upper": {
            "best": rep.x_upper.best,
            "points": list(rep.x_upper.points),
            "intervals": [list(s) for s in rep.x_upper.segments],
        },
        "argmax_lower": {
            "best": [x1, x2],
            "points": [list(p) for p in rep.x_pair_lower.points],
            "segments": [[list(s), list(e)] for s, e in rep.x_pair_lower.segments],
            "pair_margins": list(pair_margins(f, x1, x2)),
        },
        "packing_lattice": lattice_doc(rep.packing_lattice),
        "covering_lattice": lattice_doc(rep.covering_lattice),
        "grids": {"lower": grid_lower, "upper": args.grid_upper or UPPER_GRID},
    }
    ok = True
    if args.certify:
        tol = default_tol()
        outer = outer_polygon(f, rep.x_upper.best)
        inner = inner_polygon(f, (x1, x2))
        pk = verify_packing(outer, rep.packing_lattice, tol)
        cv = verify_covering(inner, rep.covering_lattice, args.cert_grid, tol)
        # the certificates bound K_f from outside (packing) and inside (covering);
        # densities are reported for K_f itself
        certs = [cert_doc(pk), cert_doc(cv)]
        certs[0]["density"] = rep.area_K / rep.packing_lattice.covolume
        certs[1]["density"] = rep.area_K / rep.covering_lattice.covolume
        certs[0]["certified_polygon"] = "circumscribed"
        certs[1]["certified_polygon"] = "inscribed"
        results["certificates"] = certs
        ok = pk.ok and cv.ok
    inputs = {"f": args.f, "grid": args.grid, "grid_upper": args.grid_upper}
    return envelope("kf", args.argv, inputs, results, _tolerances(args), ok), ok


def cmd_verify(args):
    pts = parse_polygon_arg(args.polygon)
    K = ConvexPolygon(pts)
    L = parse_lattice(args.lattice)
    tol = default_tol()
    if args.mode == "packing":
        c = verify_packing(K, L, tol, args.window)
    elif args.mode == "covering":
        c = verify_covering(K, L, args.grid, tol, args.window)
    else:
        c = verify_tiling(K, L, args.grid, tol, args.window)
    inputs = {"polygon": [list(p) for p in pts], "lattice": lattice_doc(L), "mode": args.mode, "window": args.window}
    results = {"certificate": cert_doc(c)}
    return envelope("verify", args.argv, inputs, results, _tolerances(args), c.ok), c.ok


def _zero_report(rows) -> dict:
    prod = S.zero_rows(rows, "product_margin")
    harm = S.zero_rows(rows, "harmonic_margin")
    prod_claimed = [min(S.dist_to_product_curve(r.x, r.y), math.hypot(r.x - 1, r.y - 1)) for r in prod]
    prod_full = [min(d, S.dist_to_triangle_edge(r.x, r.y)) for d, r in zip(prod_claimed, prod)]
    harm_claimed = [math.hypot(r.x - 1, r.y - 1) for r in harm]
    harm_full = [S.dist_to_harmonic_edge(r.x, r.y) for r in harm]
    return {
        "product_margin": {
            "zero_rows": len(prod),
            "max_dist_to_curve_and_corner": max(prod_claimed, default=0.0),
            "max_dist_including_triangle_edge": max(prod_full, default=0.0),
        },
        "harmonic_margin": {
            "zero_rows": len(harm),
            "max_dist_to_corner": max(harm_claimed, default=0.0),
            "max_dist_including_top_edge": max(harm_full, default=0.0),
        },
    }


def cmd_scan(args):
    rows = S.scan_D(args.grid)
    if args.kind == "omega":
        rows = S.filter_rows(rows, args.region)
        cloud = [(r.delta, r.theta) for r in rows]
        bad = [p for p in cloud if p[0] * p[1] < 1 - S.MARGIN_TOL or 1 / p[0] + 1 / p[1] < 2 - S.MARGIN_TOL]
        ok = not bad
        results = {"kind": "omega", "region": args.region.upper(), "grid": args.grid, "rows": len(rows), "violations": len(bad)}
        if args.out is None:
            results["points"] = [list(p) for p in cloud]
    else:
        bad = S.violations(rows)
        ok = not bad
        results = {
            "kind": "inequalities",
            "grid": args.grid,
            "rows": len(rows),
            "violations": len(bad),
            "margins": S.margin_summary(rows),
            "fary_bounds": S.check_fary_bounds(rows),
            "zero_sets": _zero_report(rows),
        }
    if args.out is not None:
        with open(args.out, "w", encoding="utf-8", newline="") as fh:
            S.write_csv(rows, fh)
        results["csv"] = args.out
    inputs = {"kind": args.kind, "grid": args.grid, "region": getattr(args, "region", None), "out": args.out}
    return envelope("scan", args.argv, inputs, results, {"margin": S.MARGIN_TOL}, ok), ok


# ---------------------------------------------------------------- argparse


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        sys.stderr.write(f"{self.prog}: error: {message}\n")
        raise SystemExit(EXIT_INPUT)


def _positive_int(text):
    v = int(text)
    if v <= 0:
        raise argparse.ArgumentTypeError("must be a positive integer")
    return v


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="latticeq", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    q = sub.add_parser("quad", help="closed-form densities and optimal lattices of a quadrilateral")
    q.add_argument("--x")
    q.add_argument("--y")
    q.add_argument("--vertices", help='four vertices "x0,y0;x1,y1;x2,y2;x3,y3"')
    q.add_argument("--exact", action="store_true", help="rational arithmetic for the closed forms")
    q.add_argument("--samples", type=_positive_int, default=5, help="samples per continuum branch")
    q.add_argument("--certify", action="store_true")
    q.add_argument("--grid", type=_positive_int, default=DEFAULT_GRID, help="covering sample grid")
    q.set_defaults(handler=cmd_quad)

    k = sub.add_parser("kf", help="numerical densities of K_f")
    k.add_argument("--f", required=True, help="poly:a0,a1,... or pwl:t0:v0,t1:v1,...")
    k.add_argument("--grid", type=_positive_int, default=None, help=f"inscribed-staircase grid (default {LOWER_GRID})")
    k.add_argument("--grid-upper", type=_positive_int, default=None, help=f"circumscribed grid (default {UPPER_GRID})")
    k.add_argument("--certify", action="store_true")
    k.add_argument("--cert-grid", type=_positive_int, default=DEFAULT_GRID)
    k.set_defaults(handler=cmd_kf)

    v = sub.add_parser("verify", help="certify a packing, covering or tiling")
    v.add_argument("--polygon", required=True, help='file with one "x,y" per line, or inline "x,y;x,y;..."')
    v.add_argument("--lattice", required=True, help='"ux,uy;vx,vy"')
    v.add_argument("--mode", choices=("packing", "covering", "tiling"), required=True)
    v.add_argument("--grid", type=_positive_int, default=DEFAULT_GRID)
    v.add_argument("--window", type=_positive_int, default=None)
    v.set_defaults(handler=cmd_verify)

    s = sub.add_parser("scan", help="sweep D")
    ssub = s.add_subparsers(dest="kind", required=True, parser_class=_Parser)
    si = ssub.add_parser("inequalities", help="margins of the density inequalities")
    si.add_argument("--grid", type=_positive_int, required=True)
    si.add_argument("--out")
    so = ssub.add_parser("omega", help="(delta, theta) cloud")
    so.add_argument("--region", type=str.upper, choices=("B1", "B2", "B3", "ALL"), required=True)
    so.add_argument("--grid", type=_positive_int, required=True)
    so.add_argument("--out")
    s.set_defaults(handler=cmd_scan)
    return p


_VALUE_FLAGS = ("--x", "--y", "--vertices", "--polygon", "--lattice", "--f")


def _attach_negative_values(argv):
    """``--lattice -0.2,0.8;...`` -> ``--lattice=-0.2,0.8;...`` so argparse does
    not mistake a coordinate list with a leading minus for an option."""
    out, k = [], 0
    while k < len(argv):
        a = argv[k]
        if a in _VALUE_FLAGS and k + 1 < len(argv) and argv[k + 1].startswith("-") and not argv[k + 1].startswith("--"):
            out.append(f"{a}={argv[k + 1]}")
            k += 2
            continue
        out.append(a)
        k += 1
    return out


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    args = build_parser().parse_args(_attach_negative_values(argv))
    args.argv = argv
    try:
        doc, ok = args.handler(args)
    except (LatticeqError, ArithmeticError) as exc:
        err = envelope(args.command, argv, {}, {"error": str(exc), "type": type(exc).__name__}, {}, False)
        sys.stdout.write(dumps(err) + "\n")
        return EXIT_INPUT if isinstance(exc, LatticeqError) else EXIT_FAIL
    sys.stdout.write(dumps(doc) + "\n")
    return EXIT_OK if ok else EXIT_FAIL


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
