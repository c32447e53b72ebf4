"""Grid sweeps of the moduli triangle D: density inequality margins, the
(delta, theta) point clouds, and CSV emission."""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass

from .errors import DomainError
from .quad import RegionTag, delta_L, region_classify, theta_L

MARGIN_TOL = 1e-9
COLUMNS = (
    "x",
    "y",
    "region",
    "delta",
    "theta",
    "product_margin",
    "harmonic_margin",
    "sum_margin",
    "ismailescu_margin",
)
MARGINS = ("product_margin", "harmonic_margin", "sum_margin", "ismailescu_margin")
REGIONS = ("B1", "B2", "B3", "ALL")


@dataclass(frozen=True)
class ScanRow:
    x: float
    y: float
    region: RegionTag
    delta: float
    theta: float
    product_margin: float
    harmonic_margin: float
    sum_margin: float
    ismailescu_margin: float

    def margins(self) -> dict:
        return {m: getattr(self, m) for m in MARGINS}


def margins(delta: float, theta: float) -> tuple:
    """(delta*theta - 1, 1/delta + 1/theta - 2, delta + theta - 2, 1 + 5/4 sqrt(1 - delta) - theta)."""
    return (
        delta * theta - 1.0,
        1.0 / delta + 1.0 / theta - 2.0,
        delta + theta - 2.0,
        1.0 + 1.25 * math.sqrt(max(1.0 - delta, 0.0)) - theta,
    )


def make_row(x: float, y: float) -> ScanRow:
    d, t = float(delta_L(x, y)), float(theta_L(x, y))
    return ScanRow(x, y, region_classify(x, y), d, t, *margins(d, t))


def grid_points(grid_n: int):
    """(i/n, j/n) with j >= i, i + j >= n and j <= n, sorted by (x, y); both
    closed edges x = y and x + y = 1 are included."""
    if grid_n < 10:
        raise DomainError("grid_n must be at least 10")
    n = grid_n
    for i in range(0, n + 1):
        for j in range(max(i, n - i), n + 1):
            yield i / n, j / n


def scan_D(grid_n: int) -> list:
    return [make_row(x, y) for x, y in grid_points(grid_n)]


def omega_cloud(region: str, grid_n: int, rows=None) -> list:
    """(delta, theta) pairs of the grid points lying in the given coarse region."""
    region = region.upper()
    if region not in REGIONS:
        raise DomainError(f"region must be one of {REGIONS}, got {region!r}")
    rows = scan_D(grid_n) if rows is None else rows
    return [(r.delta, r.theta) for r in rows if region == "ALL" or r.region.coarse == region]


def filter_rows(rows, region: str) -> list:
    region = region.upper()
    if region not in REGIONS:
        raise DomainError(f"region must be one of {REGIONS}, got {region!r}")
    return [r for r in rows if region == "ALL" or r.region.coarse == region]


def margin_summary(rows) -> dict:
    """Minimum of each margin with its first (x, y) argmin in row order."""
    out = {}
    for m in MARGINS:
        best = min(rows, key=lambda r: getattr(r, m))
        out[m] = {"min": getattr(best, m), "argmin": (best.x, best.y)}
    return out


def violations(rows, tol: float = MARGIN_TOL) -> list:
    return [r for r in rows if any(getattr(r, m) < -tol for m in MARGINS)]


def zero_rows(rows, margin: str, tol: float = MARGIN_TOL) -> list:
    return [r for r in rows if abs(getattr(r, margin)) <= tol]


# Zero sets of the product and harmonic margins. Equality in delta*theta >= 1
# holds on the segment 2y - x - 1 = 0 of B2, at (1, 1), and on the whole
# triangle edge x + y = 1 (where delta = 2/3, theta = 3/2); equality in
# 1/delta + 1/theta >= 2 holds on the edge y = 1 for x >= 1/3.


def dist_to_product_curve(x: float, y: float) -> float:
    """Distance to {2y - x - 1 = 0, x >= 1/3, y >= 2/3} inside D."""
    # the segment runs from (1/3, 2/3) to (1, 1)
    return _dist_to_segment(x, y, (1 / 3, 2 / 3), (1.0, 1.0))


def dist_to_triangle_edge(x: float, y: float) -> float:
    return _dist_to_segment(x, y, (0.0, 1.0), (0.5, 0.5))


def dist_to_harmonic_edge(x: float, y: float) -> float:
    return _dist_to_segment(x, y, (1 / 3, 1.0), (1.0, 1.0))


def _dist_to_segment(x, y, a, b) -> float:
    ex, ey = b[0] - a[0], b[1] - a[1]
    t = min(max(((x - a[0]) * ex + (y - a[1]) * ey) / (ex * ex + ey * ey), 0.0), 1.0)
    return math.hypot(x - (a[0] + t * ex), y - (a[1] + t * ey))


def check_fary_bounds(rows, tol: float = MARGIN_TOL) -> dict:
    """Check 2/3 <= delta <= 1 <= theta <= 3/2 on every row and report the extremal rows."""
    rows = list(rows)
    if not rows:
        raise DomainError("no rows to check")
    bad = [r for r in rows if not (2 / 3 - tol <= r.delta <= 1 + tol and 1 - tol <= r.theta <= 1.5 + tol)]
    pick = {
        "min_delta": min(rows, key=lambda r: r.delta),
        "max_delta": max(rows, key=lambda r: r.delta),
        "min_theta": min(rows, key=lambda r: r.theta),
        "max_theta": max(rows, key=lambda r: r.theta),
    }
    report = {"ok": not bad, "violations": len(bad)}
    for name, r in pick.items():
        report[name] = {"value": r.delta if "delta" in name else r.theta, "at": (r.x, r.y)}
    return report


def fmt(v) -> str:
    """17 significant digits, '.' decimal separator."""
    return format(float(v), ".17g")


def write_csv(rows, fh) -> int:
    """Write rows (sorted by (x, y)) to a text stream; returns the row count."""
    w = csv.writer(fh, lineterminator="\n")
    w.writerow(COLUMNS)
    n = 0
    for r in sorted(rows, key=lambda r: (r.x, r.y)):
        w.writerow([fmt(r.x), fmt(r.y), r.region.coarse] + [fmt(getattr(r, c)) for c in COLUMNS[3:]])
        n += 1
    return n


def csv_text(rows) -> str:
    buf = io.StringIO()
    write_csv(rows, buf)
    return buf.getvalue()


def read_csv(path) -> list:
    with open(path, encoding="utf-8", newline="") as fh:
        return list(csv.DictReader(fh))
