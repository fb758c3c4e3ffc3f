"""Time the compiled kernels against the NumPy fallback.

    python benchmarks/bench_kernels.py [--repeat 5]
"""
from __future__ import annotations

import argparse
import time

import numpy as np

from tchernoff import _kernels_py

try:
    from tchernoff import _kernels
except ImportError:
    _kernels = None


def best_of(fn, repeat: int) -> float:
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def hermitian_batch(batch: int, n: int, seed: int = 0) -> np.ndarray:
    rng = np.random.default_rng(seed)
    z = rng.standard_normal((batch, n, n)) + 1j * rng.standard_normal((batch, n, n))
    return z + np.conj(np.swapaxes(z, 1, 2))


def main(argv=None) -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args(argv)

    cases = []
    for batch, n in [(20_000, 2), (20_000, 4), (2_000, 8)]:
        a = hermitian_batch(batch, n)
        cases.append((f"jacobi_eigh {batch}x{n}x{n}", lambda mod, a=a: mod.jacobi_eigh(a)))
    cum = np.cumsum(np.ones((8, 8), dtype=np.int64) - np.eye(8, dtype=np.int64), axis=1)
    u = np.random.default_rng(1).random((100_000, 8))
    cases.append(("walks_from_uniforms 1e5x8", lambda mod: mod.walks_from_uniforms(cum, 7, u)))

    print(f"{'kernel':32s} {'python [s]':>11s} {'cython [s]':>11s} {'speedup':>8s}")
    for name, fn in cases:
        t_py = best_of(lambda: fn(_kernels_py), args.repeat)
        if _kernels is None:
            print(f"{name:32s} {t_py:11.4f} {'n/a':>11s} {'n/a':>8s}")
            continue
        t_cy = best_of(lambda: fn(_kernels), args.repeat)
        print(f"{name:32s} {t_py:11.4f} {t_cy:11.4f} {t_py / t_cy:7.1f}x")


if __name__ == "__main__":
    main()
