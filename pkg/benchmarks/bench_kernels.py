#!/usr/bin/env python3
"""Benchmark the compiled kernels against the pure-Python fallback.

Times the three float kernels (max-flow, bounded simplex, exhaustive cut
scan) on growing instance sizes and prints a table with the speedup of the
compiled extension. Run from the repository root:

    python3 benchmarks/bench_kernels.py [--repeats N]

Setting MEASUREFLOW_PURE=1 changes which backend the library itself uses,
but this script always imports both implementations directly so one process
can compare them side by side.
"""

import argparse
import random
import time

import numpy as np

from measureflow import _kernels_py as pure

try:
    from measureflow import _kernels as compiled
except ImportError:
    compiled = None


def bench(fn, args, repeats):
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best


def random_capacity(rng, n, density=0.5):
    cap = np.zeros((n, n))
    for i in range(n):
        for j in range(n):
            if i != j and rng.random() < density:
                cap[i, j] = rng.randint(1, 16) / 4
    return cap


def maxflow_case(rng, n):
    cap = random_capacity(rng, n)
    return (cap, 0, n - 1, 1e-12)


def simplex_case(rng, n, m):
    A = np.array(
        [[rng.randint(-2, 2) for _ in range(n)] for _ in range(m)], dtype=float
    )
    x_feas = np.array([rng.randint(0, 3) for _ in range(n)], dtype=float)
    b = A @ x_feas
    c = np.array([rng.randint(-3, 3) for _ in range(n)], dtype=float)
    lo = np.zeros(n)
    up = np.full(n, 8.0)
    has_up = np.ones(n, dtype=np.uint8)
    return (A, b, c, lo, up, has_up, 1e-9)


def cut_case(rng, n, pairs):
    psi = random_capacity(rng, n, density=0.7)
    psi = (psi + psi.T) / 2
    dem = []
    for _ in range(pairs):
        i, j = rng.sample(range(n), 2)
        dem.append((min(i, j), max(i, j), rng.randint(1, 4) / 2))
    return (psi, np.array(dem, dtype=np.float64))


def row(label, args, repeats):
    t_pure = bench(getattr(pure, label), args, repeats)
    if compiled is None:
        print(f"{label:12s}  pure {t_pure * 1e3:9.3f} ms   compiled: unavailable")
        return
    t_comp = bench(getattr(compiled, label), [
        np.ascontiguousarray(a) if isinstance(a, np.ndarray) else a for a in args
    ], repeats)
    ratio = t_pure / t_comp if t_comp > 0 else float("inf")
    print(
        f"{label:12s}  pure {t_pure * 1e3:9.3f} ms   "
        f"compiled {t_comp * 1e3:9.3f} ms   speedup {ratio:6.1f}x"
    )


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeats", type=int, default=5)
    opts = ap.parse_args()
    rng = random.Random(12345)

    print(f"pure backend: {pure.BACKEND}")
    print(f"compiled backend: {'missing' if compiled is None else compiled.BACKEND}")
    print()

    for n in (20, 60, 120):
        print(f"max-flow, {n} nodes")
        row("maxflow_f64", maxflow_case(rng, n), opts.repeats)
    print()
    for n, m in ((20, 12), (60, 35), (100, 60)):
        print(f"simplex, {n} vars x {m} rows")
        row("simplex_f64", simplex_case(rng, n, m), opts.repeats)
    print()
    for n, pairs in ((10, 8), (16, 12), (20, 16)):
        print(f"cut scan, {n} nodes, {pairs} demands ({2 ** n - 2} masks)")
        row("cut_scan", cut_case(rng, n, pairs), opts.repeats)


if __name__ == "__main__":
    main()
