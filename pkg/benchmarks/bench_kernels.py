"""Compare the compiled enumeration kernel against the numpy fallback.

Times ``sms_fi_grid`` on a states-by-temperatures grid for growing sequence
lengths and prints a table with the speedup plus the largest relative
discrepancy between the two backends.

Usage: python benchmarks/bench_kernels.py [--states 64] [--temps 50]
"""
import argparse
import time

import numpy as np

from seqtherm import _kernels_py
from seqtherm.bloch import BathParams, decay_factors

try:
    from seqtherm import _kernels as _kernels_cy
except ImportError:
    _kernels_cy = None


def factor_arrays(T_values, tau):
    f = np.array([decay_factors(BathParams(T), tau) for T in T_values])
    return f[:, 0], f[:, 1], f[:, 2], f[:, 3]


def bench(fn, args, repeats=3):
    best = np.inf
    for _ in range(repeats):
        t0 = time.perf_counter()
        result = fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best, result


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--states", type=int, default=64)
    parser.add_argument("--temps", type=int, default=50)
    parser.add_argument("--n-values", type=int, nargs="+",
                        default=[4, 8, 12, 16, 20])
    args = parser.parse_args()

    rng = np.random.default_rng(0)
    rz0 = rng.uniform(-1.0, 1.0, size=args.states)
    T = np.linspace(0.1, 3.0, args.temps)
    E, dE, h, dh = factor_arrays(T, 1.0)
    grid_args = (rz0, E, dE, h, dh, 1.0)

    print(f"grid: {args.states} states x {args.temps} temperatures")
    header = f"{'n':>4} {'python [s]':>12} {'cython [s]':>12} {'speedup':>9} {'max rel diff':>13}"
    print(header)
    print("-" * len(header))
    for n in args.n_values:
        t_py, r_py = bench(_kernels_py.sms_fi_grid, (*grid_args, n))
        if _kernels_cy is None:
            print(f"{n:>4} {t_py:>12.4f} {'n/a':>12} {'n/a':>9} {'n/a':>13}")
            continue
        t_cy, r_cy = bench(_kernels_cy.sms_fi_grid, (*grid_args, n))
        scale = np.maximum(np.abs(r_py), 1e-300)
        diff = float(np.max(np.abs(r_py - r_cy) / scale))
        print(f"{n:>4} {t_py:>12.4f} {t_cy:>12.4f} {t_py / t_cy:>8.1f}x {diff:>13.2e}")


if __name__ == "__main__":
    main()
