#!/usr/bin/env python3
"""Benchmark the numba kernels against the pure-numpy fallback.

Run:  python benchmarks/bench_kernels.py [--xmax 1e7]
"""

import argparse
import time

import numpy as np

from chebbias import groups as gr
from chebbias.chebotarev.frobenius import SplitData
from chebbias.kernels import base_primes, get_backend


def timed(fn, *args, repeat=3):
    best = float("inf")
    result = None
    for _ in range(repeat):
        t0 = time.perf_counter()
        result = fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best, result


def main() -> None:
    parser = argparse.ArgumentParser()
    parser.add_argument("--xmax", type=float, default=1e7)
    args = parser.parse_args()
    xmax = int(args.xmax)

    numba = get_backend("numba")
    numpy_ = get_backend("numpy")
    base = base_primes(int(xmax**0.5) + 1)

    # warm the JIT cache outside the timings
    numba.sieve_range(2, 10**4, base)
    numba.frob_indices(np.asarray([2, 3, 5], dtype=np.int64), 1, 24)
    numba.ddf_pattern_codes(
        np.asarray([5, 7], dtype=np.int64), np.asarray([-1, -1, 0, 0, 1], dtype=np.int64)
    )

    rows = []

    t_nb, primes = timed(numba.sieve_range, 2, xmax, base)
    t_np, primes_np = timed(numpy_.sieve_range, 2, xmax, base)
    assert np.array_equal(primes, primes_np)
    rows.append(("sieve_range", f"primes to {xmax:.0e}", t_nb, t_np))

    t_nb, f_nb = timed(numba.frob_indices, primes, 42, 40320)
    t_np, f_np = timed(numpy_.frob_indices, primes, 42, 40320)
    assert np.array_equal(f_nb, f_np)
    rows.append(("frob_indices", f"{len(primes)} primes", t_nb, t_np))

    coeffs = np.asarray([-1, -1, 0, 0, 1], dtype=np.int64)
    sel = primes[primes != 283][: min(len(primes), 200_000)]
    t_nb, c_nb = timed(numba.ddf_pattern_codes, sel, coeffs, repeat=1)
    t_np, c_np = timed(numpy_.ddf_pattern_codes, sel, coeffs, repeat=1)
    assert np.array_equal(c_nb, c_np)
    rows.append(("ddf_pattern_codes", f"{len(sel)} primes, quartic", t_nb, t_np))

    q8 = gr.catalog("Q8")
    _, cay = gr.cayley_embedding(q8)
    sd = SplitData(cay)
    kargs = sd._kernel_args()
    gidx = np.arange(0, 40320, 4, dtype=np.int64)
    orders = cay.target.orders()
    numba.split_counts_batch(*kargs, gidx[:8], orders, sd.n_src_classes)
    t_nb, s_nb = timed(
        numba.split_counts_batch, *kargs, gidx, orders, sd.n_src_classes, repeat=1
    )
    t_np, s_np = timed(
        numpy_.split_counts_batch, *kargs, gidx, orders, sd.n_src_classes, repeat=1
    )
    assert np.array_equal(s_nb, s_np)
    rows.append(("split_counts_batch", f"{len(gidx)} elements x 5040 cosets", t_nb, t_np))

    width = max(len(r[0]) for r in rows)
    print(f"{'kernel':<{width}}  {'workload':<28}  {'numba':>9}  {'numpy':>9}  {'speedup':>7}")
    for name, load, t_nb, t_np in rows:
        print(f"{name:<{width}}  {load:<28}  {t_nb:>8.3f}s  {t_np:>8.3f}s  {t_np / t_nb:>6.1f}x")


if __name__ == "__main__":
    main()
