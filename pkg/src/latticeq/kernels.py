"""Kernel backend selection.

The compiled extension is used when it imports; setting LATTICEQ_PURE_PYTHON=1
forces the numpy/pure-Python fallback. Callers go through ``active()`` so a
benchmark can switch backends at runtime with ``use()``.
"""

from __future__ import annotations

import os
from contextlib import contextmanager

from . import _kernels_py

try:
    from . import _ckernels
except ImportError:  # extension not built
    _ckernels = None

BACKENDS = {"python": _kernels_py}
if _ckernels is not None:
    BACKENDS["compiled"] = _ckernels

_active = _kernels_py
if _ckernels is not None and os.environ.get("LATTICEQ_PURE_PYTHON", "") not in ("1", "true", "yes"):
    _active = _ckernels


def active():
    return _active


def backend_name() -> str:
    return "compiled" if _active is _ckernels and _ckernels is not None else "python"


@contextmanager
def use(name: str):
    """Temporarily route all kernel calls to the named backend."""
    global _active
    if name not in BACKENDS:
        raise KeyError(f"kernel backend {name!r} unavailable (have {sorted(BACKENDS)})")
    prev, _active = _active, BACKENDS[name]
    try:
        yield BACKENDS[name]
    finally:
        _active = prev
