"""Compare the numba and numpy prime-field elimination kernels.

    python3 benchmarks/bench_kernels.py [--sizes 50 100 200] [--prime 5] [--repeat 3]

Both backends reduce the same random matrices; the pivots and reduced
matrices are compared before any timing is reported.  A second table
times an end-to-end workload (rank and kernel of random F_p matrices
through the library) with the backend switched at runtime.
"""
import argparse
import random
import time

import numpy as np

from weylcat import _kernels
from weylcat.linalg import OperatorMatrix, kernel, rank
from weylcat.rings import GF


def best_of(fn, repeat):
    best = float("inf")
    for _ in range(repeat):
        t = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t)
    return best


def bench_raw(sizes, p, repeat, seed):
    rng = np.random.default_rng(seed)
    rows = []
    for n in sizes:
        a = rng.integers(0, p, size=(n, n + n // 2), dtype=np.int64)
        a1, a2 = a.copy(), a.copy()
        p1 = _kernels.rref_mod_p(a1, n, p, impl="numpy")
        p2 = _kernels.rref_mod_p(a2, n, p, impl="numba")
        assert np.array_equal(p1, p2) and np.array_equal(a1, a2), "backends disagree"
        t_np = best_of(lambda: _kernels.rref_mod_p(a.copy(), n, p, impl="numpy"), repeat)
        t_nb = best_of(lambda: _kernels.rref_mod_p(a.copy(), n, p, impl="numba"), repeat)
        rows.append((n, t_np, t_nb))
    return rows


def bench_library(sizes, p, repeat, seed):
    R = GF(p)
    rng = random.Random(seed)
    out = []
    for n in sizes:
        M = OperatorMatrix(R, n, n, [[rng.randrange(p) for _ in range(n)] for _ in range(n)])

        def work():
            rank(M)
            kernel(M)

        times = {}
        for name in ("numpy", "numba"):
            _kernels.set_backend(name)
            work()  # warm up / compile
            times[name] = best_of(work, repeat)
        out.append((n, times["numpy"], times["numba"]))
    return out


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--sizes", type=int, nargs="+", default=[25, 50, 100, 200])
    ap.add_argument("--prime", type=int, default=5)
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    if not _kernels.NUMBA_AVAILABLE:
        print("numba not importable; nothing to compare")
        return
    # compile once outside the timed region
    _kernels.rref_mod_p(np.ones((2, 2), dtype=np.int64), 2, args.prime, impl="numba")

    print(f"raw rref mod {args.prime} (n x 1.5n, best of {args.repeat})")
    print(f"{'n':>6} {'numpy s':>10} {'numba s':>10} {'speedup':>8}")
    for n, a, b in bench_raw(args.sizes, args.prime, args.repeat, args.seed):
        print(f"{n:>6} {a:>10.5f} {b:>10.5f} {a / b:>8.1f}")

    prev = _kernels.backend()
    try:
        print(f"\nlibrary rank + kernel over Fp:{args.prime}")
        print(f"{'n':>6} {'numpy s':>10} {'numba s':>10} {'speedup':>8}")
        for n, a, b in bench_library(args.sizes, args.prime, args.repeat, args.seed):
            print(f"{n:>6} {a:>10.5f} {b:>10.5f} {a / b:>8.1f}")
    finally:
        _kernels.set_backend(prev)


if __name__ == "__main__":
    main()
