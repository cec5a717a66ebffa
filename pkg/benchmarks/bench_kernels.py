#!/usr/bin/env python3
"""Benchmark: compiled circulation kernels vs the pure-Python fallback.

Times the raw recursion kernel, a full 4x4 inversion, and a 16x16 block
inversion under each backend, then prints a comparison table. Both
backends produce bit-identical numbers; this only measures speed.

Run: python benchmarks/bench_kernels.py [repeats]
"""

import sys
import time

import numpy as np

import photonloop._kernels_py as kernels_py

try:
    import photonloop._kernels as kernels_c
except ImportError:
    kernels_c = None

import photonloop.loop as loop_mod
from photonloop import LoopConfig, NoiseConfig, block_invert, partition
from photonloop.fixtures import DEMO1, random_diagonally_dominant


def time_call(fn, repeats):
    best = float("inf")
    for _ in range(repeats):
        started = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - started)
    return best


def bench_raw_kernel(kernels, repeats):
    rng = np.random.default_rng(0)
    weights = np.eye(4) * 0.92 + rng.uniform(-0.01, 0.01, (4, 4))
    inject = np.array([1.0, 0.0, 0.0, 0.0])
    noise = rng.normal(0, 1e-4, (2000, 4))
    states = np.empty((2000, 4))
    rels = np.empty(2000)

    def run():
        kernels.run_recursive_solve(weights, 1.0, inject, noise, 0.0, 2000, 1e9,
                                    states, rels)

    return time_call(run, repeats)


def bench_inversion(kernels, repeats):
    cfg = LoopConfig(tol=1e-10, noise=NoiseConfig(sigma_ase=1e-6, rng_seed=1, quantize=False))
    original = loop_mod.kernels
    loop_mod.kernels = kernels
    try:
        def run():
            loop_mod.invert_matrix(DEMO1, cfg, strict=False)

        return time_call(run, repeats)
    finally:
        loop_mod.kernels = original


def bench_block_invert(kernels, repeats):
    rng = np.random.default_rng(2)
    a = random_diagonally_dominant(16, rng)
    grid = partition(a)
    cfg = LoopConfig(tol=1e-8, noise=NoiseConfig.ideal())
    original = loop_mod.kernels
    loop_mod.kernels = kernels
    try:
        def run():
            block_invert(grid, cfg)

        return time_call(run, repeats)
    finally:
        loop_mod.kernels = original


def main():
    repeats = int(sys.argv[1]) if len(sys.argv) > 1 else 5
    cases = [
        ("2000-circulation kernel", bench_raw_kernel),
        ("4x4 inversion (tol 1e-10)", bench_inversion),
        ("16x16 block inversion", bench_block_invert),
    ]
    print(f"{'case':<28} {'python':>12} {'cython':>12} {'speedup':>9}")
    for name, bench in cases:
        t_py = bench(kernels_py, repeats)
        if kernels_c is None:
            print(f"{name:<28} {t_py * 1e3:>10.3f} ms {'n/a':>12} {'n/a':>9}")
            continue
        t_c = bench(kernels_c, repeats)
        print(f"{name:<28} {t_py * 1e3:>10.3f} ms {t_c * 1e3:>10.3f} ms {t_py / t_c:>8.1f}x")
    if kernels_c is None:
        print("compiled extension not available; built the package with Cython to compare")


if __name__ == "__main__":
    main()
