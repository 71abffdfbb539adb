"""Benchmark the compiled solver kernels against the NumPy/SciPy fallback.

Times the two hot operations behind apply_bura_inverse: batched shifted
tridiagonal solves (the certified path) and shifted CG on a 2D five-point
matrix (the general path).

Usage: python benchmarks/bench_kernels.py [--sizes 255 1023 4095] [--repeat 20]
"""

import argparse
import time

import numpy as np
import scipy.sparse as sp

from burafrac._kernels import BACKEND, get_backend


def _time(fn, repeat):
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def bench_tridiag(kb, n, nrhs, repeat):
    rng = np.random.default_rng(0)
    main = np.full(n, 0.5) + 0.3
    off = np.full(n - 1, -0.25)
    b = rng.standard_normal((n, nrhs))
    return _time(lambda: kb.tridiag_solve(main, off, b), repeat)


def bench_cg(kb, side, repeat):
    t = sp.diags([np.full(side, 2.0), np.full(side - 1, -1.0), np.full(side - 1, -1.0)], [0, -1, 1])
    a = (sp.kronsum(t, t) / 8.0).tocsr()
    rng = np.random.default_rng(1)
    b = rng.standard_normal(a.shape[0])
    data, idx, ptr = a.data, a.indices.astype(np.int32), a.indptr.astype(np.int32)
    return _time(lambda: kb.cg_shifted(data, idx, ptr, -0.5, b, 1e-10, 10000), repeat)


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--sizes", type=int, nargs="+", default=[255, 1023, 4095])
    ap.add_argument("--nrhs", type=int, default=64)
    ap.add_argument("--grid-side", type=int, default=48)
    ap.add_argument("--repeat", type=int, default=20)
    args = ap.parse_args()

    backends = ["python"] + (["cython"] if BACKEND == "cython" else [])
    if BACKEND != "cython":
        print("note: compiled extension not built, timing fallback only")

    print(f"{'kernel':<28} " + " ".join(f"{b:>12}" for b in backends) + "      speedup")
    for n in args.sizes:
        times = [bench_tridiag(get_backend(b), n, args.nrhs, args.repeat) for b in backends]
        label = f"tridiag n={n} nrhs={args.nrhs}"
        ratio = f"{times[0] / times[-1]:10.2f}x" if len(times) == 2 else ""
        print(f"{label:<28} " + " ".join(f"{t * 1e3:10.3f}ms" for t in times) + ratio)
    times = [bench_cg(get_backend(b), args.grid_side, max(3, args.repeat // 4)) for b in backends]
    label = f"cg 2d grid {args.grid_side}^2"
    ratio = f"{times[0] / times[-1]:10.2f}x" if len(times) == 2 else ""
    print(f"{label:<28} " + " ".join(f"{t * 1e3:10.3f}ms" for t in times) + ratio)


if __name__ == "__main__":
    main()
