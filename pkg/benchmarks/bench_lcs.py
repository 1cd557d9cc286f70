"""Benchmark: compiled LCS kernel vs the pure-Python fallback.

Usage: python3 benchmarks/bench_lcs.py [--sizes 200,500,1000]
"""

import argparse
import random
import time

from draftdesk._kernels import BACKEND, _intern_ids
from draftdesk._kernels._lcs_py import lcs_length_ids as py_kernel

try:
    from draftdesk._kernels._lcs_cy import lcs_length_ids as cy_kernel
except ImportError:
    cy_kernel = None


def make_pair(n, rng):
    vocab = [f"w{k}" for k in range(50)]
    a = [rng.choice(vocab) for _ in range(n)]
    b = list(a)
    # mutate ~20% of the final text, like an instructor edit pass
    for _ in range(n // 5):
        b[rng.randrange(len(b))] = rng.choice(vocab)
    return _intern_ids(a, b)


def bench(kernel, pairs, repeats=3):
    best = float("inf")
    for _ in range(repeats):
        start = time.perf_counter()
        for a, b in pairs:
            kernel(a, b)
        best = min(best, time.perf_counter() - start)
    return best


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--sizes", default="200,500,1000,2000")
    args = parser.parse_args()
    rng = random.Random(0)
    print(f"selected backend at import: {BACKEND}")
    print(f"{'tokens':>8} {'python':>12} {'cython':>12} {'speedup':>9}")
    for n in (int(s) for s in args.sizes.split(",")):
        pairs = [make_pair(n, rng) for _ in range(5)]
        t_py = bench(py_kernel, pairs)
        if cy_kernel is None:
            print(f"{n:>8} {t_py:>11.4f}s {'n/a':>12} {'n/a':>9}")
            continue
        t_cy = bench(cy_kernel, pairs)
        for a, b in pairs:
            assert py_kernel(a, b) == cy_kernel(a, b)
        print(f"{n:>8} {t_py:>11.4f}s {t_cy:>11.4f}s {t_py / t_cy:>8.1f}x")


if __name__ == "__main__":
    main()
