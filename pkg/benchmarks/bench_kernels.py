"""Benchmark the numba kernels against the pure-numpy fallbacks.

Times the three hot loops (Weierstrass series core, Hermite recurrence,
Zak summation) on both backends and prints a table. The numba path is
warmed once before timing so JIT compilation is excluded.

Usage: python benchmarks/bench_kernels.py [--repeats 5] [--csv out.csv]
"""

import argparse
import time

import numpy as np

from gaborlab import _kernels_numpy
from gaborlab.backend import HAS_NUMBA
from gaborlab.elliptic import build_context
from gaborlab.lattice import from_generators

if HAS_NUMBA:
    from gaborlab import _kernels_numba


def _median_time(fn, repeats):
    times = []
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return float(np.median(times))


def make_cases(rng):
    ctx = build_context(from_generators(np.array([[1.0, 0.3], [0.0, 1.1]])))
    z = (rng.random(20000) - 0.5) * 12 + 1j * (rng.random(20000) - 0.5) * 12
    weier_args = (z, ctx._cz, ctx._cs, ctx._cp, ctx._cp1,
                  ctx._g2, ctx._rsafe)

    t = (rng.random(200000) - 0.5) * 10.0
    hermite_args = (t, 16)

    fvals = (rng.random((25, 512)) + 1j * rng.random((25, 512))).astype(complex)
    phases = np.exp(2j * np.pi * rng.random((25, 512)))
    zak_args = (np.ascontiguousarray(fvals), np.ascontiguousarray(phases))

    return [
        ("weier_core", "20k points", "weier_core", weier_args),
        ("hermite_rec", "200k points, order 16", "hermite_rec", hermite_args),
        ("zak_sums", "25x512 terms x 512 freqs", "zak_sums", zak_args),
    ]


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--repeats", type=int, default=5)
    ap.add_argument("--csv", help="optional machine-readable output")
    args = ap.parse_args()

    rng = np.random.default_rng(42)
    cases = make_cases(rng)

    rows = []
    for name, size, attr, call_args in cases:
        np_fn = getattr(_kernels_numpy, attr)
        t_np = _median_time(lambda: np_fn(*call_args), args.repeats)
        if HAS_NUMBA:
            nb_fn = getattr(_kernels_numba, attr)
            nb_fn(*call_args)  # warm the JIT cache
            t_nb = _median_time(lambda: nb_fn(*call_args), args.repeats)
            ref = np_fn(*call_args)
            got = nb_fn(*call_args)
            if isinstance(ref, tuple):
                agree = max(float(np.max(np.abs(a - b)))
                            for a, b in zip(ref, got))
            else:
                agree = float(np.max(np.abs(ref - got)))
        else:
            t_nb, agree = float("nan"), float("nan")
        rows.append((name, size, t_np, t_nb, t_np / t_nb if t_nb else
                     float("nan"), agree))

    print(f"{'kernel':<12} {'size':<26} {'numpy ms':>10} {'numba ms':>10} "
          f"{'speedup':>8} {'max |diff|':>11}")
    for name, size, t_np, t_nb, speedup, agree in rows:
        print(f"{name:<12} {size:<26} {t_np * 1e3:>10.2f} "
              f"{t_nb * 1e3:>10.2f} {speedup:>8.2f} {agree:>11.2e}")
    if not HAS_NUMBA:
        print("numba not importable: only the numpy fallback was timed")

    if args.csv:
        with open(args.csv, "w", encoding="utf-8") as fh:
            fh.write("# content: kernel backend benchmark\n")
            fh.write("kernel,size,numpy_s,numba_s,speedup,max_abs_diff\n")
            for name, size, t_np, t_nb, speedup, agree in rows:
                fh.write(f"{name},{size},{t_np:.17g},{t_nb:.17g},"
                         f"{speedup:.17g},{agree:.17g}\n")


if __name__ == "__main__":
    main()
