"""The compiled and pure-Python kernels must agree."""

import numpy as np
import pytest

from latticeq import kernels, make_convex_function
from latticeq import quad as Q
from latticeq.kf import kf_densities
from latticeq.verify import verify_covering

needs_compiled = pytest.mark.skipif("compiled" not in kernels.BACKENDS, reason="extension not built")

PROFILES = [
    make_convex_function("poly:1,0,0,-1"),
    make_convex_function("poly:1,-0.3,-0.2"),
    make_convex_function("pwl:0:1,0.3:0.9,0.7:0.6,1:0.1"),
    Q.fbar(0.6, 0.8),
]


def both(fn):
    out = {}
    for name in kernels.BACKENDS:
        with kernels.use(name) as K:
            out[name] = fn(K)
    return out


def test_use_restores_backend():
    before = kernels.active()
    with kernels.use("python"):
        assert kernels.backend_name() == "python"
    assert kernels.active() is before
    with pytest.raises(KeyError):
        with kernels.use("fortran"):
            pass


@needs_compiled
@pytest.mark.parametrize("f", PROFILES, ids=lambda f: f.spec_text()[:20])
def test_pointwise_kernels_agree(f):
    kind, a, b = f.kernel_args()
    ts = np.linspace(0, 1, 97)
    res = both(lambda K: (K.profile_values(kind, a, b, ts), [K.phi(kind, a, b, t) for t in ts], [K.psi(kind, a, b, 0.3, t) for t in ts]))
    for x, y in zip(res["python"], res["compiled"]):
        assert np.allclose(x, y, rtol=0, atol=1e-14)


@needs_compiled
@pytest.mark.parametrize("f", PROFILES, ids=lambda f: f.spec_text()[:20])
def test_optimizer_kernels_agree(f):
    kind, a, b = f.kernel_args()
    res = both(
        lambda K: (
            K.golden_min_upper(kind, a, b, 0.0, 1.0, 1e-10, 200),
            tuple(K.polish_lower(kind, a, b, 0.3, 0.7, 1e-10, 500)[:3]),
            K.golden_lower_axis(kind, a, b, 0.4, 0.8, 1, 0.4, 1.0, 1e-10, 200),
        )
    )
    for x, y in zip(res["python"], res["compiled"]):
        assert np.allclose(np.asarray(x, float), np.asarray(y, float), atol=1e-9)


@needs_compiled
def test_covered_mask_agree():
    K = Q.quad_polygon(0.55, 0.6)
    (L,) = Q.optimal_covering_lattices(0.55, 0.6).members
    res = both(lambda _: verify_covering(K, L.scaled(1.02), 128).uncovered_fraction)
    assert res["python"] == res["compiled"]


@needs_compiled
def test_kf_report_agrees():
    f = make_convex_function("poly:1,0,0,-1")
    res = both(lambda _: kf_densities(f, 257, 1025))
    assert res["python"].delta == pytest.approx(res["compiled"].delta, abs=1e-12)
    assert res["python"].theta == pytest.approx(res["compiled"].theta, abs=1e-10)


def test_benchmark_runs(capsys):
    import importlib.util
    import pathlib

    path = pathlib.Path(__file__).resolve().parents[1] / "benchmarks" / "bench_kernels.py"
    spec = importlib.util.spec_from_file_location("bench_kernels", path)
    mod = importlib.util.module_from_spec(spec)
    spec.loader.exec_module(mod)
    mod.main(["--repeat", "1"])
    out = capsys.readouterr().out
    assert "verify_covering" in out


def test_env_forces_python_fallback():
    import os
    import subprocess
    import sys

    env = dict(os.environ, LATTICEQ_PURE_PYTHON="1")
    out = subprocess.run(
        [sys.executable, "-c", "from latticeq import kernels; print(kernels.backend_name())"],
        capture_output=True, text=True, env=env, check=True,
    ).stdout.strip()
    assert out == "python"
