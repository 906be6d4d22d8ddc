"""Compare the numba and numpy sweep backends on the dominance check.

Run:  python benchmarks/sweep_benchmark.py [--d 4] [--step 0.02]

The numba path streams rank chunks through a compiled kernel; the numpy
fallback materializes digit blocks and evaluates them vectorized.  Both
must agree on every reported extremum, not just the pass/fail verdict.
"""

import argparse
import os
import sys
import time

sys.path.insert(0, os.path.join(os.path.dirname(__file__), "..", "src"))


def run(d: int, step: float) -> None:
    from qmid._kernels import HAVE_NUMBA, total_points
    from qmid._kernels import run_dominance

    n = total_points(d, round(1.0 / step))
    print(f"d={d} step={step}  ({n:,} grid points)")
    results = {}
    backends = ["numpy"] + (["numba"] if HAVE_NUMBA else [])
    for backend in backends:
        os.environ["QMID_BACKEND"] = backend
        if backend == "numba":
            run_dominance(d, 0.1)  # warm the JIT cache off the clock
        t0 = time.perf_counter()
        rep = run_dominance(d, step)
        dt = time.perf_counter() - t0
        results[backend] = rep
        rate = n / dt / 1e6
        print(f"  {backend:6s}  {dt:8.2f} s  {rate:8.2f} Mpts/s  "
              f"violations={rep.n_bad}  worst margin={max(rep.max_under.values()):.2e}")
    if len(results) == 2:
        a, b = results["numpy"], results["numba"]
        # identical verdicts required; margins may differ in the last bits
        # because the two code paths round differently
        same = (a.n_bad == b.n_bad
                and all(abs(a.max_over[p] - b.max_over[p]) < 1e-9 for p in a.max_over)
                and all(abs(a.max_under[p] - b.max_under[p]) < 1e-9 for p in a.max_under))
        print(f"  backends agree (verdicts exact, margins to 1e-9): {same}")
    os.environ.pop("QMID_BACKEND", None)


if __name__ == "__main__":
    ap = argparse.ArgumentParser()
    ap.add_argument("--d", type=int, default=4)
    ap.add_argument("--step", type=float, default=0.02)
    args = ap.parse_args()
    run(args.d, args.step)
