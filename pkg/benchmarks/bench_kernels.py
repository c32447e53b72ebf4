"""Compiled vs pure-Python kernels on the hot paths.

    python3 benchmarks/bench_kernels.py --repeat 3

Each workload runs under both backends; the table reports the best wall time
and the speedup, and the results of the two backends are checked to agree.
"""

import argparse
import time

from latticeq import kernels
from latticeq import quad as Q
from latticeq.kf import kf_densities, maximize_lower_area, minimize_upper_area
from latticeq.profiles import make_convex_function
from latticeq.verify import verify_covering

CUBIC = make_convex_function("poly:1,0,0,-1")


def workloads():
    K = Q.quad_polygon(0.55, 0.6)
    (L,) = Q.optimal_covering_lattices(0.55, 0.6).members
    return {
        "kf_densities(1 - x^3)": lambda: kf_densities(CUBIC).theta,
        "maximize_lower_area(fbar 0.55,0.6)": lambda: maximize_lower_area(Q.fbar(0.55, 0.6))[0],
        "minimize_upper_area(1 - x^3)": lambda: minimize_upper_area(CUBIC)[0],
        "verify_covering(grid 512)": lambda: verify_covering(K, L, 512).uncovered_fraction,
    }


def best_time(fn, repeat):
    out, best = None, float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t0)
    return best, out


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args(argv)
    names = [n for n in ("python", "compiled") if n in kernels.BACKENDS]
    print(f"{'workload':40s}" + "".join(f"{n:>12s}" for n in names) + ("     speedup" if len(names) == 2 else ""))
    for label, fn in workloads().items():
        times, values = [], []
        for n in names:
            with kernels.use(n):
                t, v = best_time(fn, args.repeat)
            times.append(t)
            values.append(v)
        if len(values) == 2 and abs(values[0] - values[1]) > 1e-9:
            raise SystemExit(f"{label}: backends disagree ({values[0]!r} vs {values[1]!r})")
        row = f"{label:40s}" + "".join(f"{t:11.4f}s" for t in times)
        if len(times) == 2:
            row += f"{times[0] / times[1]:11.1f}x"
        print(row)


if __name__ == "__main__":
    main()
