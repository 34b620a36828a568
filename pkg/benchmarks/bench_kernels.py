"""Time the numba and numpy curvature kernels on the family grid and random batches.

Run with ``python3 benchmarks/bench_kernels.py [--res 301] [--random 20000]``.
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from bachflat import _kernels
from bachflat.acceptance import random_algebra


def best_of(fn, repeat: int) -> float:
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--res", type=int, default=301)
    ap.add_argument("--random", type=int, default=20000)
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()

    a = np.linspace(-1.5, 1.5, args.res)
    A, B = np.meshgrid(a, a, indexing="ij")
    grid = _kernels.family_batch(A.ravel(), B.ravel())
    rng = np.random.default_rng(0)
    pool = np.array([random_algebra(rng).c for _ in range(200)])
    rand = pool[rng.integers(0, len(pool), args.random)]

    kernels = [("numpy", _kernels.numpy_bach_batch)]
    if _kernels.HAVE_NUMBA:
        _kernels.numba_bach_batch(grid[:2])  # compile outside the timing
        kernels.append(("numba", _kernels.numba_bach_batch))

    print(f"{'batch':<22} {'size':>8} " + " ".join(f"{n:>10}" for n, _ in kernels))
    for label, batch in ((f"family {args.res}x{args.res}", grid), ("random algebras", rand)):
        ts = [best_of(lambda f=f: f(batch), args.repeat) for _, f in kernels]
        print(f"{label:<22} {len(batch):>8} " + " ".join(f"{t:>9.3f}s" for t in ts))
    if len(kernels) == 2:
        diff = np.abs(kernels[0][1](grid) - kernels[1][1](grid)).max()
        print(f"max |B_numpy - B_numba| on the grid: {diff:.1e}")


if __name__ == "__main__":
    main()
