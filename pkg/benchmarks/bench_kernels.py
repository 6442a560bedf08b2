#!/usr/bin/env python3
"""Benchmark the compiled kernels against the pure-numpy fallback.

The two hot paths are the reduced-word orbit enumeration (critical-exponent
fits walk ~10^7 words) and the all-offsets power sums behind the
Janson-Wolff integral.  Run from the repository root:

    python benchmarks/bench_kernels.py [--depth 12] [--grid 2048]
"""

import argparse
import time

import numpy as np

from limitlab import _kernels_py
from limitlab.groups import punctured_torus_group
from limitlab.kernels import BACKEND

try:
    from limitlab import _kernels as _kernels_cy
except ImportError:
    _kernels_cy = None


def timed(fn, *args, repeat=3):
    best = np.inf
    result = None
    for _ in range(repeat):
        t0 = time.perf_counter()
        result = fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best, result


def bench_orbit(depth):
    gens = punctured_torus_group(3.0).sl2_generators
    rows = []
    t_py, (d_py, *_rest) = timed(lambda: _kernels_py.orbit_stats(gens, depth))
    rows.append(("orbit_stats (numpy)", t_py, len(d_py)))
    if _kernels_cy is not None:
        t_cy, (d_cy, *_rest) = timed(lambda: _kernels_cy.orbit_stats(gens, depth))
        rows.append(("orbit_stats (cython)", t_cy, len(d_cy)))
        assert np.allclose(d_py, d_cy, atol=1e-12)
    return rows


def bench_offsets(grid):
    rng = np.random.default_rng(0)
    vals = rng.normal(size=grid) + 1j * rng.normal(size=grid)
    rows = []
    t_py, r_py = timed(lambda: _kernels_py.offset_power_sums(vals, 1.3))
    rows.append(("offset_power_sums (numpy)", t_py, len(r_py)))
    if _kernels_cy is not None:
        t_cy, r_cy = timed(lambda: _kernels_cy.offset_power_sums(vals, 1.3))
        rows.append(("offset_power_sums (cython)", t_cy, len(r_cy)))
        assert np.allclose(r_py, r_cy, rtol=1e-12)
    return rows


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--depth", type=int, default=12, help="word-ball radius")
    parser.add_argument("--grid", type=int, default=2048, help="offset-sum grid size")
    args = parser.parse_args()

    print(f"selected backend: {BACKEND}")
    if _kernels_cy is None:
        print("compiled extension not built; showing the fallback only")
    rows = bench_orbit(args.depth) + bench_offsets(args.grid)
    width = max(len(r[0]) for r in rows)
    for name, t, n in rows:
        print(f"{name:<{width}}  {t * 1e3:9.1f} ms   (n = {n})")
    by_task = {}
    for name, t, _ in rows:
        task = name.split(" (")[0]
        by_task.setdefault(task, {})[name.split("(")[1].rstrip(")")] = t
    for task, impls in by_task.items():
        if {"numpy", "cython"} <= impls.keys():
            print(f"{task}: cython speedup x{impls['numpy'] / impls['cython']:.1f}")


if __name__ == "__main__":
    main()
