"""Benchmark the numba feasibility kernel against the pure-numpy path.

Run with the package installed:

    python benchmarks/bench_kernels.py

Set FZN2QIP_NO_NUMBA=1 to confirm the fallback is the active backend.
"""

from __future__ import annotations

import time

import numpy as np

from fzn2qip.kernels import _mask_numpy, active_backend, feasible_mask


def make_workload(rows: int, n_vars: int, seed: int = 0):
    rng = np.random.default_rng(seed)
    values = rng.integers(-8, 9, size=(rows, n_vars)).astype(np.int64)
    eq_coef = rng.integers(-3, 4, size=(4, n_vars)).astype(np.int64)
    eq_const = rng.integers(-4, 5, size=4).astype(np.int64)
    ineq_coef = rng.integers(-3, 4, size=(8, n_vars)).astype(np.int64)
    ineq_const = rng.integers(-4, 5, size=8).astype(np.int64)
    prod_idx = rng.integers(0, n_vars, size=(3, 3)).astype(np.int64)
    return values, eq_coef, eq_const, ineq_coef, ineq_const, prod_idx


def bench(fn, args, repeats: int = 5) -> float:
    fn(*args)  # warm-up (jit compilation for the numba path)
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best


def main() -> None:
    print(f"active backend: {active_backend()}")
    for rows in (10_000, 100_000, 1_000_000):
        args = make_workload(rows, n_vars=12)
        t_active = bench(feasible_mask, args)
        t_numpy = bench(_mask_numpy, args)
        assert np.array_equal(feasible_mask(*args), _mask_numpy(*args))
        print(
            f"rows={rows:>9,}  {active_backend():>5}: {t_active * 1e3:8.2f} ms"
            f"   numpy: {t_numpy * 1e3:8.2f} ms"
            f"   speedup: {t_numpy / t_active:5.2f}x"
        )


if __name__ == "__main__":
    main()
