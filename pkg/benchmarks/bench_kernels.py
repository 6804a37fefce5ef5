"""Compare the compiled and numpy kernel backends.

    python benchmarks/bench_kernels.py [--repeat N]

Each kernel runs on identical inputs under both backends; the script checks
that the results agree before printing timings.
"""

import argparse
import timeit

import numpy as np

from fixpoint import kernels

CASES = {
    # kernel name: what the timed call does
    "triangle_search": "first triangle violation, 200 euclidean points (full O(n^3) scan)",
    "pairwise_sup": "pairwise sup distances, 300 tables of 8 x 3",
    "rowwise_sup": "row-wise distances, 100000 points in 3-D",
}


def inputs(seed=0):
    rng = np.random.default_rng(seed)
    pts = rng.uniform(-1, 1, (200, 1, 2))
    D = kernels.pairwise_sup(pts, kernels.METRIC_CODES["euclidean"])
    tables = rng.uniform(-1, 1, (300, 8, 3))
    X = rng.uniform(-1, 1, (100_000, 1, 3))
    Y = rng.uniform(-1, 1, (100_000, 1, 3))
    return {
        "triangle_search": lambda: kernels.first_triangle_violation(D),
        "pairwise_sup": lambda: kernels.pairwise_sup(tables, kernels.METRIC_CODES["euclidean"]),
        "rowwise_sup": lambda: kernels.rowwise_sup(X, Y, kernels.METRIC_CODES["max"]),
    }


def same(a, b):
    if a is None or isinstance(a, tuple):
        return a == b
    return np.allclose(a, b, rtol=1e-13, atol=0)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    backends = kernels.available_backends()
    if "cython" not in backends:
        print("compiled kernels are not built; only the numpy backend is available")
    fns = inputs()
    print(f"{'kernel':<16} " + " ".join(f"{b:>12}" for b in backends) + "   speedup")
    for name, fn in fns.items():
        results, times = [], []
        for b in backends:
            kernels.use_backend(b)
            results.append(fn())
            times.append(min(timeit.repeat(fn, number=1, repeat=args.repeat)))
        assert all(same(results[0], r) for r in results[1:]), f"{name}: backends disagree"
        speed = f"{times[-1] / times[0]:8.1f}x" if len(times) > 1 else ""
        print(f"{name:<16} " + " ".join(f"{t * 1e3:10.2f}ms" for t in times) + f"  {speed}")
        print(f"  {CASES[name]}")
    kernels.use_backend(backends[0])


if __name__ == "__main__":
    main()
