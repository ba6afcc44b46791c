"""Compare the compiled and pure-Python RK4 kernels.

    python3 benchmarks/bench_kernels.py [--steps 10000] [--repeat 5]

Reports the best-of-``repeat`` wall time for one hemisphere integration and
for a full shooting solve, plus the largest difference between the two
backends' trajectories.
"""
from __future__ import annotations

import argparse
import math
import time

import numpy as np

from singlab import _kernels_py
from singlab.regimes import ProblemParams, ell_coefficient

try:
    from singlab import _kernels as _compiled
except ImportError:
    _compiled = None


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--steps", type=int, default=10000)
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--N", type=int, default=3)
    ap.add_argument("--p", type=float, default=1.75)
    args = ap.parse_args(argv)

    ell = ell_coefficient(args.N, args.p)
    h = 0.5 * math.pi / args.steps
    call = (float(args.N - 2), ell, h, 1.0, 0.0, h, args.steps - 1)

    backends = {"python": _kernels_py.rk4_hemisphere}
    if _compiled is not None:
        backends["compiled"] = _compiled.rk4_hemisphere
    else:
        print("compiled extension not built; timing the Python kernel only")

    timings = {}
    for name, fn in backends.items():
        timings[name] = best_of(lambda fn=fn: fn(*call), args.repeat)
        print(f"rk4_hemisphere[{name:8s}] {args.steps} steps: {1e3 * timings[name]:9.3f} ms")
    if len(backends) == 2:
        wp, dwp, _ = backends["python"](*call)
        wc, dwc, _ = backends["compiled"](*call)
        diff = max(np.max(np.abs(wp - wc)), np.max(np.abs(dwp - dwc)))
        print(f"speed-up {timings['python'] / timings['compiled']:.1f}x; "
              f"max trajectory difference {diff:.3e}")

    # full shooting solve through the public API, one backend at a time
    from singlab import kernels, profile_nd
    params = ProblemParams(args.N, args.p)
    for name, fn in backends.items():
        profile_nd.rk4_hemisphere = fn
        t = best_of(lambda: profile_nd.shoot_solve(params, steps=args.steps), 1)
        print(f"shoot_solve[{name:8s}] N={args.N} p={args.p}: {t:8.3f} s")
    profile_nd.rk4_hemisphere = kernels.rk4_hemisphere


if __name__ == "__main__":
    main()
