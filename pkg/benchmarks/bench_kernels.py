"""Compare the compiled kernel backend against the pure-numpy fallback.

Run with:  python3 benchmarks/bench_kernels.py
"""

import time

import numpy as np

from pnskit import _kernels_py
from pnskit import kernels


def _timeit(fn, *args, repeat=5):
    best = float("inf")
    for _ in range(repeat):
        start = time.perf_counter()
        fn(*args)
        best = min(best, time.perf_counter() - start)
    return best


def bench_g_inverse(size=100_000, m=5):
    q = np.array([0.4, 0.2, 0.2, 0.1, 0.1])
    u = np.linspace(1e-6, 1 - 1e-6, size)
    return [
        ("g_inverse_batch", name, _timeit(mod.g_inverse_batch, u, q))
        for name, mod in (("compiled", kernels), ("python", _kernels_py))
        if name != "compiled" or kernels.BACKEND == "compiled"
    ]


def bench_ml_root(size=100_000, m=5):
    rng = np.random.default_rng(0)
    nr = rng.integers(1, 20, size=(size, m)).astype(np.int64)
    yr = rng.integers(0, nr + 1).astype(np.int64)
    return [
        ("ml_root_batch", name, _timeit(mod.ml_root_batch, yr, nr))
        for name, mod in (("compiled", kernels), ("python", _kernels_py))
        if name != "compiled" or kernels.BACKEND == "compiled"
    ]


def main():
    print(f"active backend: {kernels.BACKEND}")
    rows = bench_g_inverse() + bench_ml_root()
    width = max(len(r[0]) for r in rows)
    for name, backend, secs in rows:
        print(f"{name:<{width}}  {backend:<8}  {secs * 1e3:9.2f} ms")
    for op in ("g_inverse_batch", "ml_root_batch"):
        times = {backend: secs for name, backend, secs in rows if name == op}
        if len(times) == 2:
            print(f"{op}: compiled is {times['python'] / times['compiled']:.1f}x faster")


if __name__ == "__main__":
    main()
