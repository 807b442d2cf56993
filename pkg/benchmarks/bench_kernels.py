#!/usr/bin/env python3
"""Benchmark the compiled kernels against the pure-Python/numpy fallback.

Times the two hot paths — token hashing into signed feature vectors and
the nearest-centroid scan — and reports the speedup plus the maximum
numeric deviation between backends.

Usage: python3 benchmarks/bench_kernels.py [--docs N] [--agents N] [--dim N]
"""

import argparse
import random
import time

import numpy as np

from streamtopics import _purekernels


def load_compiled():
    try:
        from streamtopics import _speedups

        return _speedups
    except ImportError:
        return None


def bench(fn, repeats=3):
    best = float("inf")
    for _ in range(repeats):
        start = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - start)
    return best


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--docs", type=int, default=20000)
    parser.add_argument("--agents", type=int, default=128)
    parser.add_argument("--dim", type=int, default=64)
    args = parser.parse_args()

    compiled = load_compiled()
    rng = random.Random(0)
    vocab = [f"word{i:05d}" for i in range(5000)]
    docs = [rng.choices(vocab, k=rng.randint(5, 12)) for _ in range(args.docs)]

    nrng = np.random.default_rng(0)
    centroids = nrng.normal(size=(args.agents, args.dim))
    centroids /= np.linalg.norm(centroids, axis=1, keepdims=True)
    points = nrng.normal(size=(args.docs, args.dim))
    points /= np.linalg.norm(points, axis=1, keepdims=True)

    print(f"{args.docs} docs, {args.agents} agents, dim {args.dim}")
    print(f"{'kernel':<18}{'pure':>10}{'compiled':>10}{'speedup':>9}{'max|diff|':>11}")

    def row(name, pure_fn, fast_fn, diff_fn):
        t_pure = bench(pure_fn)
        if compiled is None:
            print(f"{name:<18}{t_pure:>9.3f}s{'-':>10}{'-':>9}{'-':>11}")
            return
        t_fast = bench(fast_fn)
        diff = diff_fn()
        print(f"{name:<18}{t_pure:>9.3f}s{t_fast:>9.3f}s{t_pure / t_fast:>8.1f}x{diff:>11.2e}")

    row(
        "hash_accumulate",
        lambda: [_purekernels.accumulate_tokens(d, args.dim) for d in docs],
        lambda: [compiled.accumulate_tokens(d, args.dim) for d in docs],
        lambda: max(
            float(np.max(np.abs(_purekernels.accumulate_tokens(d, args.dim) - compiled.accumulate_tokens(d, args.dim))))
            for d in docs[:200]
        ),
    )
    row(
        "nearest_centroid",
        lambda: [_purekernels.nearest_centroid(p, centroids) for p in points],
        lambda: [compiled.nearest_centroid(p, centroids) for p in points],
        lambda: max(
            abs(_purekernels.nearest_centroid(p, centroids)[1] - compiled.nearest_centroid(p, centroids)[1])
            for p in points[:200]
        ),
    )
    row(
        "distances_to",
        lambda: [_purekernels.distances_to(points[:512], c) for c in centroids],
        lambda: [compiled.distances_to(points[:512], c) for c in centroids],
        lambda: float(
            max(
                np.max(np.abs(_purekernels.distances_to(points[:512], c) - compiled.distances_to(points[:512], c)))
                for c in centroids
            )
        ),
    )
    if compiled is None:
        print("compiled backend not built; run: python3 setup.py build_ext --inplace")


if __name__ == "__main__":
    main()
