"""Benchmark the compiled kernels against the pure-python fallback.

Runs the three hot paths (compensated cumulative sums, weighted power sums,
the fused Cesaro/envelope/checkpoint scan) on identical data through both
backends, reporting wall time and the worst absolute disagreement.

Usage: python benchmarks/bench_kernels.py [--n 8388608] [--repeat 3]
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from dixtrace import _kernels_py

try:
    from dixtrace import _kernels_cy
except ImportError:
    _kernels_cy = None


def _time(fn, repeat: int) -> float:
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def bench(n: int, repeat: int) -> None:
    rng = np.random.default_rng(7)
    x = rng.random(n)
    chunk = 1 << 20
    cps = np.unique(
        np.round(1024.0 * (n / 1024.0) ** np.linspace(0, 1, 57)).astype(np.int64)
    )

    def run_cumsum(k):
        state = k.new_state()
        out = 0.0
        for lo in range(0, n, chunk):
            seg = k.kahan_cumsum(x[lo : lo + chunk], state)
            out = seg[-1]
        return out

    def run_pow(k):
        total = 0.0
        for lo in range(0, n, chunk):
            total += k.weighted_pow_sum(x[lo : lo + chunk] + 0.5, 1.25, x[lo : lo + chunk])
        return total

    def run_cesaro(k):
        state = k.new_state()
        cp_mean = np.zeros(len(cps))
        cp_raw = np.zeros(len(cps))
        k0, ci = 0, 0
        for lo in range(0, n, chunk):
            k0, ci = k.cesaro_update(
                x[lo : lo + chunk], k0, 2, n // 2, state, cps, ci, cp_mean, cp_raw
            )
        return cp_mean.copy(), k.envelope(state)

    rows = []
    for label, fn in [("cumsum", run_cumsum), ("pow-sum", run_pow), ("cesaro", run_cesaro)]:
        t_py = _time(lambda: fn(_kernels_py), repeat)
        if _kernels_cy is None:
            rows.append((label, t_py, None, None))
            continue
        t_cy = _time(lambda: fn(_kernels_cy), repeat)
        ref, got = fn(_kernels_py), fn(_kernels_cy)
        if label == "cesaro":
            diff = max(
                float(np.max(np.abs(ref[0] - got[0]))),
                abs(ref[1][0] - got[1][0]),
                abs(ref[1][1] - got[1][1]),
            )
        else:
            diff = abs(ref - got)
        rows.append((label, t_py, t_cy, diff))

    print(f"n = {n}, repeat = {repeat}")
    print(f"{'kernel':<10} {'python':>10} {'cython':>10} {'speedup':>9} {'max|diff|':>11}")
    for label, t_py, t_cy, diff in rows:
        if t_cy is None:
            print(f"{label:<10} {t_py:>9.4f}s {'absent':>10}")
        else:
            print(
                f"{label:<10} {t_py:>9.4f}s {t_cy:>9.4f}s {t_py / t_cy:>8.2f}x {diff:>11.3e}"
            )


if __name__ == "__main__":
    ap = argparse.ArgumentParser()
    ap.add_argument("--n", type=int, default=1 << 23)
    ap.add_argument("--repeat", type=int, default=3)
    ns = ap.parse_args()
    bench(ns.n, ns.repeat)
