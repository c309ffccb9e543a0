#!/usr/bin/env python3
"""Benchmark the pure-Python kernels against the compiled extension.

Times the two hot kernels (concrete trajectory stepping and symbolic replay)
and one end-to-end certification sweep per backend.  Usage:

    python benchmarks/bench_kernels.py [--repeat N]
"""
from __future__ import annotations

import argparse
import time
from fractions import Fraction as F

from meanmedian import _kernel_py

try:
    from meanmedian import _kernel_cy
except ImportError:
    _kernel_cy = None

CASES = [
    ("traj x=1/2+1/100000 (L=73)", "traj", (F(1, 2) + F(1, 100000), 10000)),
    ("traj x=10/19 (L=47)", "traj", (F(10, 19), 10000)),
    ("traj x=16363868994277/31955404123290 (L=271)", "traj", (F(16363868994277, 31955404123290), 10000)),
    ("replay L=73 driving list", "replay", (F(1, 2) + F(1, 100000),)),
    ("replay L=271 driving list", "replay", (F(16363868994277, 31955404123290),)),
]


def timeit(fn, repeat):
    best = None
    for _ in range(repeat):
        start = time.perf_counter()
        fn()
        elapsed = time.perf_counter() - start
        best = elapsed if best is None else min(best, elapsed)
    return best


def driving_of(x):
    terminated, L, points, _medians, k = _kernel_py.traj_core(x.numerator, x.denominator, 10000)
    assert terminated
    keys = [num << (k - e) for num, e in points]
    return tuple(sorted(range(1, L + 1), key=lambda i: keys[i - 1]))


def bench_kernels(repeat):
    rows = []
    for label, kind, args in CASES:
        if kind == "traj":
            x, threshold = args
            call_args = (x.numerator, x.denominator, threshold)
            fns = {"pure": lambda: _kernel_py.traj_core(*call_args)}
            if _kernel_cy is not None:
                fns["compiled"] = lambda: _kernel_cy.traj_core(*call_args)
        else:
            order = driving_of(args[0])
            fns = {"pure": lambda: _kernel_py.replay_core(order)}
            if _kernel_cy is not None:
                fns["compiled"] = lambda: _kernel_cy.replay_core(order)
        timings = {name: timeit(fn, repeat) for name, fn in fns.items()}
        rows.append((label, timings))
    return rows


def bench_sweep():
    import meanmedian.certify as certify
    import meanmedian.trajectory as trajectory
    from meanmedian import _backend

    results = {}
    kernels = {"pure": _kernel_py}
    if _kernel_cy is not None:
        kernels["compiled"] = _kernel_cy
    original = _backend.kernel
    try:
        for name, mod in kernels.items():
            _backend.kernel = mod
            certify.kernel = mod
            trajectory.kernel = mod
            cfg = certify.SweepConfig(seed=F(1, 2), direction="right", max_atoms=120)
            start = time.perf_counter()
            pieces = list(certify.sweep(cfg))
            results[name] = time.perf_counter() - start
            assert len(pieces) == 121
    finally:
        _backend.kernel = original
        certify.kernel = original
        trajectory.kernel = original
    return results


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--repeat", type=int, default=5)
    args = parser.parse_args()

    if _kernel_cy is None:
        print("compiled kernel not built; benchmarking the pure kernel only\n")

    width = 44
    print(f"{'case':<{width}} {'pure':>10} {'compiled':>10} {'speedup':>8}")
    for label, timings in bench_kernels(args.repeat):
        pure = timings["pure"]
        if "compiled" in timings:
            comp = timings["compiled"]
            print(f"{label:<{width}} {pure*1e3:>8.3f}ms {comp*1e3:>8.3f}ms {pure/comp:>7.2f}x")
        else:
            print(f"{label:<{width}} {pure*1e3:>8.3f}ms {'-':>10} {'-':>8}")

    sweep_times = bench_sweep()
    pure = sweep_times["pure"]
    if "compiled" in sweep_times:
        comp = sweep_times["compiled"]
        print(f"{'sweep: 120 atoms rightward from 1/2':<{width}} {pure:>9.3f}s {comp:>9.3f}s {pure/comp:>7.2f}x")
    else:
        print(f"{'sweep: 120 atoms rightward from 1/2':<{width}} {pure:>9.3f}s {'-':>10} {'-':>8}")


if __name__ == "__main__":
    main()
