"""Timing comparison of the RK4 propagation kernels.

Runs the same vectorized-evolution workload through the compiled extension
and the pure NumPy fallback and reports best-of-N wall times. The workload
mirrors heavy production use: many sample intervals with a few capped
substeps each on the 9x9 superoperator.

Usage: python3 benchmarks/bench_propagator.py [--intervals N] [--substeps K]
"""

import argparse
import time

import numpy as np

from drivenjc import ModelParams, RatePair, build_liouvillian, dressed_spectrum, vec
from drivenjc._kernels import BACKEND
from drivenjc._kernels.fallback import rk4_propagate as numpy_kernel

try:
    from drivenjc._kernels._rk4 import rk4_propagate as compiled_kernel
except ImportError:
    compiled_kernel = None


def build_workload(n_intervals, substeps_per_interval):
    spectrum = dressed_spectrum(ModelParams(Omega=0.2, xi=0.1))
    L = build_liouvillian(spectrum, RatePair(0.002, 0.006)).matrix
    coords = spectrum.bare_in_dressed("e0").astype(complex)
    rho0 = np.outer(coords, coords.conj())
    rho0 /= np.trace(rho0).real
    v0 = vec(rho0)
    substeps = np.full(n_intervals, substeps_per_interval, dtype=np.int64)
    h = np.full(n_intervals, 0.005, dtype=float)
    return L, v0, substeps, h


def best_of(kernel, args, repeats):
    times = []
    for _ in range(repeats):
        start = time.perf_counter()
        kernel(*args)
        times.append(time.perf_counter() - start)
    return min(times)


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--intervals", type=int, default=10000)
    parser.add_argument("--substeps", type=int, default=2)
    parser.add_argument("--repeats", type=int, default=5)
    args = parser.parse_args()

    workload = build_workload(args.intervals, args.substeps)
    total_steps = args.intervals * args.substeps

    print(f"active backend: {BACKEND}")
    print(f"workload: {args.intervals} intervals x {args.substeps} substeps "
          f"= {total_steps} RK4 steps on a 9x9 system")

    rows = [("numpy fallback", numpy_kernel)]
    if compiled_kernel is not None:
        rows.insert(0, ("compiled", compiled_kernel))
        gap = np.max(np.abs(compiled_kernel(*workload) - numpy_kernel(*workload)))
        print(f"kernel agreement: max |difference| = {gap:.2e}")
    else:
        print("compiled kernel unavailable; timing the fallback only")

    results = []
    for name, kernel in rows:
        seconds = best_of(kernel, workload, args.repeats)
        results.append((name, seconds))
        print(f"{name:>16}: {seconds * 1e3:8.2f} ms  "
              f"({total_steps / seconds / 1e6:6.2f} M steps/s)")

    if len(results) == 2:
        print(f"{'speedup':>16}: {results[1][1] / results[0][1]:8.1f}x")


if __name__ == "__main__":
    main()
