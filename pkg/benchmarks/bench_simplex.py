"""Compare the compiled row-projection kernel against the numpy fallback.

Run:  python3 benchmarks/bench_simplex.py
"""

import time

import numpy as np

from mvclust import _simplex_np

try:
    from mvclust import _simplex
except ImportError:
    _simplex = None


def bench(fn, v, repeats=7):
    best = np.inf
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn(v)
        best = min(best, time.perf_counter() - t0)
    return best


def main():
    rng = np.random.default_rng(0)
    print(f"{'rows x cols':>14} {'numpy':>10} {'compiled':>10} {'speedup':>8}")
    for n, m in [(300, 10), (300, 300), (1000, 10), (1000, 1000),
                 (3000, 30), (3000, 3000)]:
        v = np.ascontiguousarray(rng.normal(size=(n, m)))
        t_np = bench(_simplex_np.project_rows, v)
        if _simplex is None:
            print(f"{n:>7} x {m:<4} {t_np * 1e3:>9.2f}ms {'n/a':>10}")
            continue
        t_cy = bench(lambda x: np.asarray(_simplex.project_rows(x)), v)
        a = _simplex_np.project_rows(v)
        b = np.asarray(_simplex.project_rows(v))
        assert np.array_equal(a, b), "backends disagree"
        print(f"{n:>7} x {m:<4} {t_np * 1e3:>9.2f}ms {t_cy * 1e3:>8.2f}ms "
              f"{t_np / t_cy:>7.1f}x")
    if _simplex is None:
        print("compiled kernel not built; numpy fallback only")


if __name__ == "__main__":
    main()
