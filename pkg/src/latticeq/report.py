"""Structured report documents: deterministic JSON with floats written at 17
significant digits, and the JSON Schema every report conforms to."""

from __future__ import annotations

import json
import math
from dataclasses import fields, is_dataclass
from enum import Enum
from fractions import Fraction

from . import __version__
from .geometry import Lattice2, Point2


def fmt_float(v: float):
    """JSON token for a float: 17 significant digits, or null when not finite."""
    v = float(v)
    if not math.isfinite(v):
        return "null"
    text = format(v, ".17g")
    if text in ("-0",):
        text = "0"
    return text


def lattice_doc(L: Lattice2) -> dict:
    return {"u": list(L.u), "v": list(L.v), "det": L.det}


def to_builtin(obj):
    """Convert package objects into JSON-ready dicts/lists (floats left as floats)."""
    if isinstance(obj, Lattice2):
        return lattice_doc(obj)
    if isinstance(obj, Point2):
        return [obj.x, obj.y]
    if isinstance(obj, Enum):
        return obj.value
    if isinstance(obj, Fraction):
        return float(obj)
    if is_dataclass(obj) and not isinstance(obj, type):
        return {f.name: to_builtin(getattr(obj, f.name)) for f in fields(obj)}
    if isinstance(obj, dict):
        return {str(k): to_builtin(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_builtin(v) for v in obj]
    return obj


def dumps(obj, indent: int = 2) -> str:
    """Serialize with insertion-ordered keys and 17-digit floats."""
    obj = to_builtin(obj)
    out = []
    _emit(obj, out, 0, indent)
    return "".join(out)


def _emit(obj, out, level, indent):
    pad = " " * (indent * (level + 1))
    end = " " * (indent * level)
    if obj is None or isinstance(obj, bool):
        out.append(json.dumps(obj))
    elif isinstance(obj, int):
        out.append(str(obj))
    elif isinstance(obj, float):
        out.append(fmt_float(obj))
    elif isinstance(obj, str):
        out.append(json.dumps(obj, ensure_ascii=False))
    elif isinstance(obj, dict):
        if not obj:
            out.append("{}")
            return
        out.append("{\n")
        for k, (key, val) in enumerate(obj.items()):
            out.append(pad + json.dumps(key, ensure_ascii=False) + ": ")
            _emit(val, out, level + 1, indent)
            out.append(",\n" if k < len(obj) - 1 else "\n")
        out.append(end + "}")
    elif isinstance(obj, list):
        if not obj:
            out.append("[]")
            return
        if all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in obj):
            out.append("[" + ", ".join(str(v) if isinstance(v, int) else fmt_float(v) for v in obj) + "]")
            return
        out.append("[\n")
        for k, val in enumerate(obj):
            out.append(pad)
            _emit(val, out, level + 1, indent)
            out.append(",\n" if k < len(obj) - 1 else "\n")
        out.append(end + "]")
    else:
        out.append(json.dumps(str(obj)))


def envelope(command: str, argv, inputs: dict, results: dict, tolerances: dict, ok: bool) -> dict:
    from . import kernels

    return {
        "command": command,
        "argv": list(argv),
        "version": __version__,
        "backend": kernels.backend_name(),
        "inputs": inputs,
        "tolerances": tolerances,
        "ok": ok,
        "results": results,
    }


_NUM = {"type": ["number", "null"]}
_VEC = {"type": "array", "items": {"type": "number"}, "minItems": 2, "maxItems": 2}
_LATTICE = {
    "type": "object",
    "required": ["u", "v", "det"],
    "properties": {"u": _VEC, "v": _VEC, "det": {"type": "number"}},
}
_CERT = {
    "type": "object",
    "required": ["mode", "ok", "density", "window_radius"],
    "properties": {
        "mode": {"enum": ["packing", "covering", "tiling"]},
        "ok": {"type": "boolean"},
        "density": {"type": "number"},
        "window_radius": {"type": "integer"},
        "grid_resolution": {"type": ["integer", "null"]},
        "max_overlap_area": _NUM,
        "uncovered_fraction": _NUM,
        "worst_point": {"anyOf": [{"type": "null"}, _VEC]},
    },
}
_FAMILY = {
    "type": "object",
    "required": ["cardinality", "members", "branches"],
    "properties": {
        "cardinality": {"enum": ["One", "Two", "Continuum"]},
        "members": {"type": "array", "items": _LATTICE},
        "branches": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["generator", "interval", "samples"],
                "properties": {
                    "generator": {"type": "string"},
                    "interval": {"type": "string"},
                    "samples": {
                        "type": "array",
                        "items": {
                            "type": "object",
                            "required": ["t", "lattice"],
                            "properties": {"t": {"type": "number"}, "lattice": _LATTICE},
                        },
                    },
                },
            },
        },
    },
}

RESULT_SCHEMAS = {
    "quad": {
        "type": "object",
        "required": ["x", "y", "region", "delta", "theta", "packing", "covering"],
        "properties": {
            "x": {"type": "number"},
            "y": {"type": "number"},
            "region": {
                "type": "object",
                "required": ["coarse", "covering_case", "packing_case"],
            },
            "delta": {"type": "number"},
            "theta": {"type": "number"},
            "packing": _FAMILY,
            "covering": _FAMILY,
            "certificates": {"type": "array", "items": _CERT},
        },
    },
    "kf": {
        "type": "object",
        "required": ["area_K", "A_upper", "A_lower", "delta", "theta", "packing_lattice", "covering_lattice"],
        "properties": {
            "area_K": {"type": "number"},
            "A_upper": {"type": "number"},
            "A_lower": {"type": "number"},
            "delta": {"type": "number"},
            "theta": {"type": "number"},
            "reciprocal_sum": {"type": "number"},
            "packing_lattice": _LATTICE,
            "covering_lattice": _LATTICE,
            "certificates": {"type": "array", "items": _CERT},
        },
    },
    "verify": {"type": "object", "required": ["certificate"], "properties": {"certificate": _CERT}},
    "scan": {
        "type": "object",
        "required": ["kind", "rows", "grid"],
        "properties": {"kind": {"enum": ["inequalities", "omega"]}, "rows": {"type": "integer"}},
    },
    "error": {"type": "object", "required": ["error"], "properties": {"error": {"type": "string"}}},
}


def report_schema(command: str) -> dict:
    """JSON Schema for the document printed by the given subcommand."""
    return {
        "$schema": "https://json-schema.org/draft/2020-12/schema",
        "type": "object",
        "required": ["command", "argv", "version", "inputs", "tolerances", "ok", "results"],
        "properties": {
            "command": {"type": "string"},
            "argv": {"type": "array", "items": {"type": "string"}},
            "version": {"type": "string"},
            "backend": {"enum": ["compiled", "python"]},
            "inputs": {"type": "object"},
            "tolerances": {"type": "object"},
            "ok": {"type": "boolean"},
            "results": RESULT_SCHEMAS[command],
        },
    }
