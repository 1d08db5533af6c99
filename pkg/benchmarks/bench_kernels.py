"""Time the numba and numpy recurrence/division kernels on float inputs.

    python benchmarks/bench_kernels.py [--sizes 500 2000 5000] [--repeat 3]
"""

from __future__ import annotations

import argparse
import math
import time

import numpy as np

from convseq._kernels import divide, run_recurrence


def _bounded_kernel(n: int) -> np.ndarray:
    """b = 1 - s/2 + s^2/2 zero-padded; alpha_0 is the partial sums of 2^-j."""
    out = np.zeros(n + 1, dtype=np.complex128)
    out[:3] = [1.0, -0.5, 0.5]
    return out


def _best(fn, repeat: int) -> float:
    best = math.inf
    for _ in range(repeat):
        t = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t)
    return best


def main() -> None:
    parser = argparse.ArgumentParser()
    parser.add_argument("--sizes", type=int, nargs="+", default=[500, 2000, 5000])
    parser.add_argument("--repeat", type=int, default=3)
    args = parser.parse_args()

    # compile once outside the timings
    run_recurrence(_bounded_kernel(8), [1], 1, 8, use_numba=True)
    divide(np.ones(4), np.ones(4), use_numba=True)

    print(f"{'kernel':<12}{'N':>7}{'numpy [s]':>12}{'numba [s]':>12}{'speedup':>9}{'max diff':>11}")
    for N in args.sizes:
        b = _bounded_kernel(N)
        cases = {
            "recurrence": lambda flag: run_recurrence(b, [1], 1, N, use_numba=flag),
            "division": lambda flag: divide(np.r_[1.0, np.zeros(N)], b - np.r_[0, 1.0, np.zeros(N - 1)], use_numba=flag),
        }
        for name, fn in cases.items():
            ref, fast = fn(False), fn(True)
            scale = max(1.0, float(np.max(np.abs(ref))))
            diff = float(np.max(np.abs(ref - fast))) / scale
            t_np = _best(lambda: fn(False), args.repeat)
            t_nb = _best(lambda: fn(True), args.repeat)
            print(f"{name:<12}{N:>7}{t_np:>12.4f}{t_nb:>12.4f}{t_np / t_nb:>9.1f}{diff:>11.1e}")


if __name__ == "__main__":
    main()
