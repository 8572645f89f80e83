"""Time the exhaustive best-response kernel: numba vs numpy.

    python benchmarks/bench_best_response.py [--repeat 5]

Each case sweeps every admissible distributor strategy for a synthetic mix of
n protocols. Results from both backends are checked for equality first.
"""
import argparse
import time

import numpy as np

from censorgame import _kernels
from censorgame.enumeration import enumerate_distributor_strategies

CASES = [(6, 5), (8, 5), (10, 10), (12, 10), (14, 20), (16, 20)]


def timeit(fn, repeat):
    best = float("inf")
    for _ in range(repeat):
        start = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - start)
    return best


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--repeat", type=int, default=5)
    args = parser.parse_args()

    if not _kernels.HAVE_NUMBA:
        print("numba not installed; only the numpy path is available")

    print(f"{'n':>3} {'quantum':>7} {'strategies':>10} {'actions':>8} {'numpy s':>10} {'numba s':>10} {'speedup':>8}")
    for n, quantum in CASES:
        covers = np.linspace(13.0, 1.0, n)
        shares = np.array([s.shares for s in enumerate_distributor_strategies(n, quantum)])
        d = 1.75
        np_fn = lambda: _kernels.best_responses_numpy(shares, covers, d)
        t_np = timeit(np_fn, args.repeat)
        if _kernels.HAVE_NUMBA:
            nb_fn = lambda: _kernels.best_responses_numba(shares, covers, d)
            nb_fn()  # compile outside the timing
            for a, b in zip(np_fn(), nb_fn()):
                assert np.array_equal(a, b), "backends disagree"
            t_nb = timeit(nb_fn, args.repeat)
            print(f"{n:>3} {quantum:>7} {len(shares):>10} {1 << n:>8} {t_np:>10.4f} {t_nb:>10.4f} {t_np / t_nb:>7.1f}x")
        else:
            print(f"{n:>3} {quantum:>7} {len(shares):>10} {1 << n:>8} {t_np:>10.4f} {'-':>10} {'-':>8}")


if __name__ == "__main__":
    main()
