"""Benchmark the compiled walk kernels against the pure-numpy fallback.

Usage: python benchmarks/bench_kernels.py [steps] [paths]
"""

import sys
import time

import numpy as np

import fbmwalk._kernels as numpy_kernels

try:
    import fbmwalk._kernels_cy as cython_kernels
except ImportError:
    cython_kernels = None


def time_kernel(fn, reps=5):
    best = float("inf")
    for _ in range(reps):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def bench_lane(name, lane, n):
    rng = np.random.default_rng(0)
    gate = rng.random(n)
    val = rng.random(n)
    u = rng.random(n)
    rows = []
    for label, fn in (
        ("paper", lambda: lane.paper_levels(gate, val, 0.05, 0.93)),
        ("matched", lambda: lane.matched_levels(u, 0.05, 0.1)),
        ("enriquez", lambda: lane.enriquez_levels(u, 0.9)),
    ):
        per_call = time_kernel(fn)
        rows.append((label, n / per_call))
    print(f"\n{name} lane, N={n}:")
    for label, rate in rows:
        print(f"  {label:9s} {rate / 1e6:9.1f} M steps/s (kernel only)")
    return rows


def bench_end_to_end(n, m):
    import os

    from fbmwalk import HurstModel

    model = HurstModel(0.7)
    print(f"\nend-to-end generate_fbm, N={n}, M={m} (includes RNG, solve, reduce):")
    for backend in ("numpy", "cython") if cython_kernels is not None else ("numpy",):
        os.environ["FBMWALK_BACKEND"] = backend
        # reload the backend module so the forced lane takes effect
        import importlib

        import fbmwalk._backend
        import fbmwalk.aggregate
        import fbmwalk.walk

        importlib.reload(fbmwalk._backend)
        importlib.reload(fbmwalk.walk)
        importlib.reload(fbmwalk.aggregate)
        t0 = time.perf_counter()
        path = fbmwalk.aggregate.generate_fbm(model, n, m, mode="paper", seed=1)
        dt = time.perf_counter() - t0
        print(f"  {backend:7s} {dt:6.2f} s  ({n * m / dt / 1e6:7.1f} M steps/s)")
        ref = path.values[-1]
    os.environ.pop("FBMWALK_BACKEND", None)
    return ref


def main():
    n = int(sys.argv[1]) if len(sys.argv) > 1 else 100_000
    m = int(sys.argv[2]) if len(sys.argv) > 2 else 200
    bench_lane("numpy", numpy_kernels, n)
    if cython_kernels is not None:
        bench_lane("cython", cython_kernels, n)
    else:
        print("\ncompiled lane not built (run `python setup.py build_ext --inplace`)")
    bench_end_to_end(n, m)


if __name__ == "__main__":
    main()
