"""Compare the numba kernels against their plain-Python fallbacks.

    python3 benchmarks/bench_kernels.py [--repeat N]

Kernel timings call the compiled function and its ``py_func`` side by side.
The sweep timing runs a subprocess with ``UUVPLAN_DISABLE_JIT=1``.
"""

import argparse
import os
import subprocess
import sys
import time

import numpy as np

from uuvplan import _accel, _kernels
from uuvplan.currentfield import CurrentSpec
from uuvplan.gridworld import build_map, generate_random_obstacles, neighbor_offsets
from uuvplan.neuroplanner import default_step_limit


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def plan_call(kernel, grid, origin, dest):
    pad = (0,) * (3 - grid.dims)
    offs = np.array([o + pad for o in neighbor_offsets(grid.dims)], dtype=np.int64)
    lim = default_step_limit(grid)
    o, d = np.array(origin + pad), np.array(dest + pad)

    def run():
        kernel(grid.grid, o, d, offs, 0.5, lim, np.zeros((lim + 1, 3), dtype=np.int64),
               np.zeros(grid.grid.shape), np.zeros(grid.grid.shape, dtype=np.int64))
    return run


def leg_call(kernel, cur):
    occ = build_map((10, 10)).grid
    d = np.array([1.0, 1.0, 0.0]) / np.sqrt(2)

    def run():
        kernel(np.array([2.0, 1.0, 0.0]), 0.0, np.array([2.0, 1.0, 0.0]), d, 7 * np.sqrt(2), 1.0, False, False,
               np.array([9.0, 9.0, 0.0]), 0.25, 0.001, 100.0, occ, cur, np.zeros(20000),
               np.zeros((20000, 3)), np.zeros((20000, 3)), 0, False)
    return run


def sweep_seconds(disable):
    env = dict(os.environ)
    if disable:
        env["UUVPLAN_DISABLE_JIT"] = "1"
    code = ("import time; from uuvplan.harness import run_sweep; run_sweep('speeds2d'); "
            "t0 = time.perf_counter(); run_sweep('ratio', n_seeds=20); print(time.perf_counter() - t0)")
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True)
    return float(out.stdout.strip())


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    if not _accel.HAS_NUMBA:
        sys.exit("numba is not installed; nothing to compare")

    cases = [
        ("greedy_plan 2D 10x10", _kernels.greedy_plan,
         lambda k: plan_call(k, build_map((10, 10)), (2, 1), (9, 9))),
        ("greedy_plan 3D 20^3, 20% obstacles", _kernels.greedy_plan,
         lambda k: plan_call(k, generate_random_obstacles((20, 20, 20), 0.2, 1, [(0, 0, 0), (19, 19, 19)]),
                             (0, 0, 0), (19, 19, 19))),
        ("integrate_leg static, dt=1e-3", _kernels.integrate_leg,
         lambda k: leg_call(k, CurrentSpec.static2d(0.3, 45).params())),
        ("integrate_leg dynamic, dt=1e-3", _kernels.integrate_leg,
         lambda k: leg_call(k, CurrentSpec.dynamic2d().params())),
    ]
    print(f"{'kernel':40s} {'numba (ms)':>12s} {'python (ms)':>12s} {'speedup':>9s}")
    for name, kernel, make in cases:
        fast, slow = make(kernel), make(_accel.python_version(kernel))
        fast()  # compile
        tf, ts = best_of(fast, args.repeat), best_of(slow, max(1, args.repeat // 2))
        print(f"{name:40s} {tf * 1e3:12.3f} {ts * 1e3:12.3f} {ts / tf:8.1f}x")
    tf, ts = sweep_seconds(False), sweep_seconds(True)
    print(f"{'ratio sweep, 20 seeds (end to end)':40s} {tf * 1e3:12.1f} {ts * 1e3:12.1f} {ts / tf:8.1f}x")


if __name__ == "__main__":
    main()
