# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels: fused weighted-exponential sums and compensated power sums.

Mirrors the numpy fallback in ghill._kernels_py; exponential variates come
from the same ziggurat sampler numpy's Generator uses, consumed draw-major,
so both backends read identical variate streams.
"""

import numpy as np

from cpython.pycapsule cimport PyCapsule_GetPointer
from libc.math cimport pow
from numpy.random cimport bitgen_t
from numpy.random.c_distributions cimport random_standard_exponential_fill

BACKEND = "cython"


def weighted_exp_sums(object w, Py_ssize_t count, object bit_generator):
    """count draws of sum_j w[j] * E_j with fresh iid standard exponentials."""
    cdef double[::1] wv = np.ascontiguousarray(w, dtype=np.float64)
    cdef bitgen_t *rng = <bitgen_t *> PyCapsule_GetPointer(
        bit_generator.capsule, "BitGenerator")
    cdef Py_ssize_t i, j, nw = wv.shape[0]
    out = np.empty(count, dtype=np.float64)
    buf = np.empty(max(nw, 1), dtype=np.float64)
    cdef double[::1] ov = out
    cdef double[::1] bv = buf
    cdef double acc, comp, term, t
    with bit_generator.lock, nogil:
        for i in range(count):
            random_standard_exponential_fill(rng, nw, &bv[0])
            # Neumaier-compensated accumulation per draw
            acc = 0.0
            comp = 0.0
            for j in range(nw):
                term = wv[j] * bv[j]
                t = acc + term
                if acc >= term:
                    comp += (acc - t) + term
                else:
                    comp += (term - t) + acc
                acc = t
            ov[i] = acc + comp
    return out


def power_sum(double p, long long k, long long start=1):
    """sum_{j=start}^{k} j**p with Neumaier-compensated serial summation."""
    cdef double acc = 0.0, comp = 0.0, term, t
    cdef long long j
    if k < start:
        return 0.0
    for j in range(start, k + 1):
        term = pow(<double> j, p)
        t = acc + term
        if acc >= term:
            comp += (acc - t) + term
        else:
            comp += (term - t) + acc
        acc = t
    return acc + comp
