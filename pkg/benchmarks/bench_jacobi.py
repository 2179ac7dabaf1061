"""Benchmark the numba and numpy Jacobi eigensolver backends.

Run:  python benchmarks/bench_jacobi.py [--repeats N]

Times full eigensolves (copy, rotate to convergence, sort) over batches
of random Hermitian matrices at the dimensions the package actually
uses, then prints the per-solve cost and the numba speedup.
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from qcorr._kernels import get_kernel

MAX_SWEEPS = 100
TOL_FACTOR = 1e-13


def random_hermitian_batch(rng, dim, count):
    a = rng.normal(size=(count, dim, dim)) + 1j * rng.normal(size=(count, dim, dim))
    return 0.5 * (a + np.conj(np.swapaxes(a, 1, 2)))


def solve_batch(kernel, batch):
    checksum = 0.0
    for h in batch:
        work = h.copy()
        v = np.eye(h.shape[0], dtype=np.complex128)
        scale = max(1.0, float(np.max(np.abs(work))))
        status = kernel(work, v, MAX_SWEEPS, TOL_FACTOR * scale, True)
        assert status >= 0
        checksum += work[0, 0].real
    return checksum


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--repeats", type=int, default=2000, help="matrices per dimension")
    parser.add_argument("--seed", type=int, default=7)
    args = parser.parse_args()

    rng = np.random.default_rng(args.seed)
    kernels = {}
    for name in ("numba", "numpy"):
        try:
            kernels[name] = get_kernel(name)
        except ImportError:
            print(f"{name} backend unavailable, skipping")

    if "numba" in kernels:
        # trigger compilation outside the timed region
        solve_batch(kernels["numba"], random_hermitian_batch(rng, 4, 1))

    print(f"{'dim':>4} {'count':>7} " + " ".join(f"{n + ' (ms/solve)':>20}" for n in kernels))
    speedups = []
    for dim in (2, 4, 8):
        batch = random_hermitian_batch(rng, dim, args.repeats)
        per_solve = {}
        for name, kernel in kernels.items():
            t0 = time.perf_counter()
            solve_batch(kernel, batch)
            per_solve[name] = (time.perf_counter() - t0) / args.repeats * 1e3
        row = f"{dim:>4} {args.repeats:>7} " + " ".join(
            f"{per_solve[n]:>20.4f}" for n in kernels
        )
        if "numba" in per_solve and "numpy" in per_solve:
            ratio = per_solve["numpy"] / per_solve["numba"]
            speedups.append(ratio)
            row += f"   numba {ratio:.1f}x faster"
        print(row)

    if speedups:
        print(f"\ngeometric-mean speedup: {float(np.prod(speedups)) ** (1 / len(speedups)):.1f}x")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
