"""Pure numpy implementations of the hot kernels.

Selected at import time by :mod:`ghill.kernels` when the compiled extension is
unavailable (or explicitly disabled).  Both backends consume random variates
from the supplied BitGenerator in the same order: exponentials draw-major,
row by row, using numpy's ziggurat sampler, so the two backends see identical
streams and differ only in floating-point accumulation order.
"""

from __future__ import annotations

import math

import numpy as np

BACKEND = "python"

# elements per generation chunk; fixed so results never depend on memory
_CHUNK_ELEMS = 1 << 22


def weighted_exp_sums(w: np.ndarray, count: int, bit_generator) -> np.ndarray:
    """count draws of sum_j w[j] * E_j with fresh iid standard exponentials.

    w is the weight vector of one draw; E consumption order is draw-major.
    """
    w = np.ascontiguousarray(w, dtype=np.float64)
    nw = w.size
    gen = np.random.Generator(bit_generator)
    out = np.empty(count, dtype=np.float64)
    rows = max(1, _CHUNK_ELEMS // max(nw, 1))
    buf = np.empty((min(rows, count), nw), dtype=np.float64)
    done = 0
    while done < count:
        m = min(rows, count - done)
        gen.standard_exponential(out=buf[:m])
        np.matmul(buf[:m], w, out=out[done:done + m])
        done += m
    return out


def power_sum(p: float, k: int, start: int = 1) -> float:
    """sum_{j=start}^{k} j**p, chunked pairwise summation plus exact reduce.

    Terms are monotone and positive, so any intermediate overflow implies the
    sum itself overflows; no extra scaling is required for representable
    results (this is why ratio powers like (f(j)/j)**2 are summed with the
    combined exponent rather than via f(j)**2).
    """
    if k < start:
        return 0.0
    partials = []
    j0 = start
    while j0 <= k:
        j1 = min(j0 + _CHUNK_ELEMS - 1, k)
        j = np.arange(j0, j1 + 1, dtype=np.float64)
        partials.append(float(np.sum(np.power(j, p))))
        j0 = j1 + 1
    return math.fsum(partials)
