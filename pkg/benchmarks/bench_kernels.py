#!/usr/bin/env python3
"""Side-by-side timing of the numba and numpy kernel backends.

Each kernel runs on random inputs of growing size; outputs of the two
backends are compared before timing.  Usage: python benchmarks/bench_kernels.py
"""
import argparse
import time

import numpy as np

from hmmcheck.kernels import backends


def best_of(fn, repeat):
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def cases(rng, n):
    M = rng.normal(size=(n, n)) + n * np.eye(n)
    b = rng.normal(size=n)
    T = rng.random((n, n)) * (rng.random((n, n)) < 4.0 / n)
    T /= np.maximum(T.sum(axis=1, keepdims=True), 1e-300)
    target = rng.random(n) < 0.05
    through = rng.random(n) < 0.7
    start = np.zeros(n, dtype=bool)
    start[0] = True
    # every state gets both copies, as for a maybe-state
    xi_idx = np.arange(0, 2 * n, 2, dtype=np.int64)
    nxi_idx = xi_idx + 1
    rows, cols = rng.random((4, n)), rng.random((4, n))
    return {
        "gauss_solve": lambda k: k.gauss_solve(M, b)[0],
        "backward_reach": lambda k: k.backward_reach(T, target, through),
        "forward_reach": lambda k: k.forward_reach(T, start),
        "assemble_split": lambda k: k.assemble_split(T, xi_idx, nxi_idx, rows, cols, 2 * n),
    }


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--sizes", type=int, nargs="+", default=[16, 64, 256, 512])
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()

    impls = backends()
    if "numba" not in impls:
        print("numba is not installed; only the numpy backend is available")
        return
    np_k, nb_k = impls["numpy"], impls["numba"]

    print("Warming up numba kernels...")
    t0 = time.perf_counter()
    for fn in cases(np.random.default_rng(0), 8).values():
        fn(nb_k)
    print(f"warmup: {time.perf_counter() - t0:.2f}s\n")

    print(f"{'kernel':>15} {'n':>5}  {'numpy (ms)':>11}  {'numba (ms)':>11}  {'speedup':>8}")
    print("-" * 58)
    rng = np.random.default_rng(1)
    for n in args.sizes:
        for name, fn in cases(rng, n).items():
            np.testing.assert_allclose(fn(np_k), fn(nb_k), rtol=1e-10, atol=1e-12)
            t_np = best_of(lambda: fn(np_k), args.repeat)
            t_nb = best_of(lambda: fn(nb_k), args.repeat)
            print(f"{name:>15} {n:>5}  {1e3 * t_np:>11.3f}  {1e3 * t_nb:>11.3f}  {t_np / t_nb:>7.1f}x")


if __name__ == "__main__":
    main()
