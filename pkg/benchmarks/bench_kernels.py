#!/usr/bin/env python3
"""Benchmark the compiled kernels against the numpy fallback.

The hot loops are (a) the per-draw weighted exponential sums behind the
series-law sampler and (b) the compensated power sums behind the
normalization constants.  Run:

    python benchmarks/bench_kernels.py
"""

import time

import numpy as np

from ghill.kernels import backends
from ghill.rng import RngStream


def timeit(fn, repeat=3):
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def main():
    found = backends()
    print(f"available backends: {', '.join(found)}\n")

    cases = [
        ("weighted_exp_sums  count=2000  J=65536", "wes", 2000, 65536),
        ("weighted_exp_sums  count=100000 J=4096", "wes", 100000, 4096),
    ]
    header = f"{'kernel case':<44}" + "".join(f"{n:>12}" for n in found) + f"{'variates/s':>14}"
    print(header)
    print("-" * len(header))
    for label, _, count, J in cases:
        w = np.arange(1, J + 1, dtype=np.float64) ** -0.75
        times = {}
        for name, mod in found.items():
            bg = RngStream(123, 0).bit_generator()
            times[name] = timeit(lambda m=mod, b=bg: m.weighted_exp_sums(w, count, b))
        rate = count * J / min(times.values())
        row = f"{label:<44}" + "".join(f"{times[n]:>11.3f}s" for n in found)
        print(row + f"{rate:>13.2e}")

    print()
    for p, k in ((-1.5, 10**7), (1.0, 10**8)):
        label = f"power_sum  p={p:+.1f}  k={k:.0e}"
        times = {}
        vals = {}
        for name, mod in found.items():
            times[name] = timeit(lambda m=mod: m.power_sum(p, k))
            vals[name] = found[name].power_sum(p, k)
        row = f"{label:<44}" + "".join(f"{times[n]:>11.3f}s" for n in found)
        print(row + f"{k / min(times.values()):>13.2e}")
        ref = list(vals.values())
        assert max(ref) - min(ref) <= 1e-9 * abs(ref[0]), "backends disagree"

    if len(found) == 2:
        # identical variate streams: the backends must agree to rounding noise
        w = np.arange(1, 4097, dtype=np.float64) ** -0.5
        draws = {name: mod.weighted_exp_sums(w, 1000, RngStream(5, 1).bit_generator())
                 for name, mod in found.items()}
        gap = float(np.max(np.abs(draws["cython"] - draws["python"])))
        print(f"\nmax |cython - python| over 1000 shared-stream draws: {gap:.3e}")


if __name__ == "__main__":
    main()
