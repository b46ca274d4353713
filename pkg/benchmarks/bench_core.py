#!/usr/bin/env python3
"""Benchmark the compiled kernels against the pure-Python/numpy fallback.

Run from the repository root after building the extension in place:

    python setup.py build_ext --inplace
    python benchmarks/bench_core.py [--quick]

Covers the two hot loops (the GF(p^3) exponent scan behind the Singer
construction and direct grid evaluation) plus the FFT fold path for
reference.
"""

import argparse
import time

import numpy as np

from flatlab import _corepy
from flatlab.singer import _find_primitive_cubic
from flatlab.trigpoly import _evaluate_grid_fft, from_support
from flatlab import singer

try:
    from flatlab import _speedups
except ImportError:
    _speedups = None


def timeit(fn, repeats=3):
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def bench_scan(primes):
    print(f"{'singer scan':<24}{'cython':>12}{'python':>12}{'speedup':>10}")
    for p in primes:
        q = p * p + p + 1
        _, tail = _find_primitive_cubic(p)
        t_py = timeit(lambda: _corepy.singer_exponent_scan(
            p, tail[0], tail[1], tail[2], q), repeats=1)
        if _speedups is None:
            print(f"  p={p:<20}{'-':>12}{t_py:>11.3f}s{'':>10}")
            continue
        t_cy = timeit(lambda: _speedups.singer_exponent_scan(
            p, tail[0], tail[1], tail[2], q), repeats=1)
        print(f"  p={p:<20}{t_cy:>11.3f}s{t_py:>11.3f}s{t_py / t_cy:>9.1f}x")


def bench_direct_eval(grids):
    s = singer.singer_set(31)
    poly = from_support(s.residues)
    freqs, coeffs = poly._arrays()
    print(f"{'direct eval':<24}{'cython':>12}{'python':>12}{'fft':>12}")
    for m in grids:
        t_py = timeit(lambda: _corepy.direct_grid_eval(freqs, coeffs, m, 0.0))
        t_fft = timeit(lambda: _evaluate_grid_fft(poly, m, 0.0))
        if _speedups is None:
            print(f"  m={m:<20}{'-':>12}{t_py:>11.4f}s{t_fft:>11.4f}s")
            continue
        t_cy = timeit(lambda: _speedups.direct_grid_eval(freqs, coeffs, m, 0.0))
        print(f"  m={m:<20}{t_cy:>11.4f}s{t_py:>11.4f}s{t_fft:>11.4f}s")


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--quick", action="store_true",
                        help="smaller parameters (CI-friendly)")
    args = parser.parse_args()
    if _speedups is None:
        print("note: compiled extension unavailable; timing the fallback only")
    primes = (31, 127) if args.quick else (31, 127, 257, 499)
    grids = (1 << 12, 1 << 14) if args.quick else (1 << 12, 1 << 14, 1 << 16)
    bench_scan(primes)
    print()
    bench_direct_eval(grids)


if __name__ == "__main__":
    main()
