"""Profile functions f defining K_f = {0 <= x <= 1, 0 <= y <= f(x)}.

K_f is convex exactly when f is concave, so "convex profile" here means a
concave, non-increasing f on [0, 1] with f(0) = 1 and f(1) >= 0.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import LatticeqError, ValidationError

POLY = 0
PWL = 1

_ENDPOINT_TOL = 1e-12
_SHAPE_TOL = 1e-9
_CHECK_GRID = 10_001


@dataclass(frozen=True)
class ConvexFunction:
    """A validated profile: a polynomial (coefficients a0..an) or a piecewise-linear
    interpolant through (knots[i], values[i]). Build through make_convex_function."""

    kind: str
    coeffs: tuple = ()
    knots: tuple = ()
    values: tuple = ()

    def __call__(self, t):
        if self.kind == "poly":
            if np.ndim(t) == 0:
                acc = 0.0
                for c in reversed(self.coeffs):
                    acc = acc * t + c
                return float(acc)
            return np.polynomial.polynomial.polyval(np.asarray(t, dtype=float), self.coeffs)
        out = np.interp(t, self.knots, self.values)
        return float(out) if np.ndim(t) == 0 else out

    @property
    def breakpoints(self) -> tuple:
        return self.knots if self.kind == "pwl" else ()

    def kernel_args(self):
        """(kind code, a, b) arrays consumed by the numeric kernels."""
        if self.kind == "poly":
            return POLY, np.asarray(self.coeffs, dtype=float), np.zeros(1)
        return PWL, np.asarray(self.knots, dtype=float), np.asarray(self.values, dtype=float)

    def spec_text(self) -> str:
        if self.kind == "poly":
            return "poly:" + ",".join(repr(float(c)) for c in self.coeffs)
        return "pwl:" + ",".join(f"{float(t)!r}:{float(v)!r}" for t, v in zip(self.knots, self.values))

    def is_unit_square(self) -> bool:
        ts = np.linspace(0.0, 1.0, 257)
        return bool(np.all(np.abs(np.asarray(self(ts)) - 1.0) <= _ENDPOINT_TOL))


def _fail(prop, t, message):
    raise ValidationError(prop, float(t), f"{message} (worst at t={float(t):.17g})")


def _check_endpoints(f0, f1):
    if abs(f0 - 1.0) > _ENDPOINT_TOL:
        _fail("f(0)=1", 0.0, f"f(0)={f0!r} must equal 1")
    if f1 < -_ENDPOINT_TOL:
        _fail("f(1)>=0", 1.0, f"f(1)={f1!r} must be non-negative")


def make_convex_function(spec) -> ConvexFunction:
    """Validate and build a profile.

    `spec` is text (``poly:1,0,0,-1`` or ``pwl:0:1,0.5:0.8,1:0.2``), a
    ("poly", coeffs) / ("pwl", knots, values) tuple, or a ConvexFunction.
    Raises ValidationError naming the violated property.
    """
    if isinstance(spec, str):
        spec = parse_profile(spec)
    if isinstance(spec, ConvexFunction):
        kind, args = spec.kind, ((spec.coeffs,) if spec.kind == "poly" else (spec.knots, spec.values))
    else:
        kind, *args = spec
    if kind == "poly":
        (coeffs,) = args
        coeffs = tuple(float(c) for c in coeffs)
        if not coeffs:
            raise LatticeqError("polynomial needs at least one coefficient")
        while len(coeffs) > 1 and coeffs[-1] == 0.0:
            coeffs = coeffs[:-1]
        f = ConvexFunction("poly", coeffs=coeffs)
        P = np.polynomial.polynomial
        _check_endpoints(f(0.0), f(1.0))
        ts = np.linspace(0.0, 1.0, _CHECK_GRID)
        d1 = P.polyval(ts, P.polyder(coeffs, 1)) if len(coeffs) > 1 else np.zeros_like(ts)
        d2 = P.polyval(ts, P.polyder(coeffs, 2)) if len(coeffs) > 2 else np.zeros_like(ts)
        i = int(np.argmax(d1))
        if d1[i] > _SHAPE_TOL:
            _fail("non-increasing", ts[i], f"derivative {d1[i]:.6g} > 0")
        i = int(np.argmax(d2))
        if d2[i] > _SHAPE_TOL:
            _fail("concave", ts[i], f"second derivative {d2[i]:.6g} > 0, K_f would not be convex")
        return f
    if kind == "pwl":
        knots, values = args
        knots = tuple(float(t) for t in knots)
        values = tuple(float(v) for v in values)
        if len(knots) != len(values) or len(knots) < 2:
            raise LatticeqError("piecewise-linear profile needs >= 2 (t, value) pairs")
        if knots[0] != 0.0 or knots[-1] != 1.0:
            raise LatticeqError("piecewise-linear knots must start at 0 and end at 1")
        if any(b <= a for a, b in zip(knots, knots[1:])):
            raise LatticeqError("piecewise-linear knots must be strictly increasing")
        _check_endpoints(values[0], values[-1])
        slopes = [(v1 - v0) / (t1 - t0) for t0, t1, v0, v1 in zip(knots, knots[1:], values, values[1:])]
        i = int(np.argmax(slopes))
        if slopes[i] > _SHAPE_TOL:
            _fail("non-increasing", knots[i], f"slope {slopes[i]:.6g} > 0 on [{knots[i]}, {knots[i + 1]}]")
        for k in range(1, len(slopes)):
            if slopes[k] - slopes[k - 1] > _SHAPE_TOL:
                _fail("concave", knots[k], f"slope increases from {slopes[k - 1]:.6g} to {slopes[k]:.6g}")
        return ConvexFunction("pwl", knots=knots, values=values)
    raise LatticeqError(f"unknown profile kind {kind!r}")


def parse_profile(text: str):
    """Parse ``poly:a0,a1,...`` or ``pwl:t0:v0,t1:v1,...`` into a raw spec tuple."""
    kind, sep, body = text.strip().partition(":")
    if not sep or not body:
        raise LatticeqError(f"cannot parse profile {text!r}")
    try:
        if kind == "poly":
            return ("poly", [float(c) for c in body.split(",")])
        if kind == "pwl":
            pairs = [item.split(":") for item in body.split(",")]
            if any(len(p) != 2 for p in pairs):
                raise ValueError("expected t:value pairs")
            return ("pwl", [float(t) for t, _ in pairs], [float(v) for _, v in pairs])
    except ValueError as exc:
        raise LatticeqError(f"cannot parse profile {text!r}: {exc}") from exc
    raise LatticeqError(f"unknown profile kind {kind!r} in {text!r}")


def area_under(f: ConvexFunction) -> float:
    """|K_f| = integral of f over [0, 1], exact per representation."""
    if f.kind == "poly":
        return float(sum(c / (k + 1) for k, c in enumerate(f.coeffs)))
    t, v = f.knots, f.values
    return float(sum(0.5 * (t[i + 1] - t[i]) * (v[i] + v[i + 1]) for i in range(len(t) - 1)))
