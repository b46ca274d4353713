# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled hot loops.

Two kernels dominate runtime at the large-parameter end of the package:
the exponent scan over the full multiplicative group of GF(p^3) used by
the Singer construction (O(p^3) sequential steps), and direct summation
of a sparse exponential sum over a uniform grid (O(terms * grid)).  Both
have pure-Python/numpy twins in ``flatlab._corepy``; ``flatlab._backend``
picks whichever is importable.
"""

from libc.math cimport cos, sin, fmod

import numpy as np

BACKEND = "cython"

cdef double TWO_PI = 6.283185307179586476925286766559


def singer_exponent_scan(long long p, long long c0, long long c1,
                         long long c2, long long q):
    """Return sorted residues {i mod q : x^i has zero x^2-coefficient}.

    The state (a0, a1, a2) walks x^i in GF(p)[x]/(x^3 - c2 x^2 - c1 x - c0)
    for i = 0 .. p^3 - 2.
    """
    cdef long long order = p * p * p - 1
    cdef long long a0 = 1, a1 = 0, a2 = 0
    cdef long long t0, t1, t2, i
    hits_arr = np.zeros(q, dtype=np.uint8)
    cdef unsigned char[::1] hits = hits_arr
    for i in range(order):
        if a2 == 0:
            hits[i % q] = 1
        t0 = (c0 * a2) % p
        t1 = (a0 + c1 * a2) % p
        t2 = (a1 + c2 * a2) % p
        a0 = t0
        a1 = t1
        a2 = t2
    return np.nonzero(hits_arr)[0].astype(np.int64)


def direct_grid_eval(long long[::1] freqs, double complex[::1] coeffs,
                     long long m, double offset):
    """Evaluate sum_f c_f e^{2 pi i f (j/m + offset)} for j = 0..m-1.

    Phases are reduced with integer arithmetic ((f*j) mod m), so the grid
    part of the phase is exact; only the offset contribution rounds.
    """
    cdef Py_ssize_t nf = freqs.shape[0]
    out_arr = np.zeros(m, dtype=np.complex128)
    cdef double complex[::1] out = out_arr
    cdef Py_ssize_t k
    cdef long long f, j, r, step
    cdef double base, ph
    cdef double complex c
    for k in range(nf):
        f = freqs[k]
        c = coeffs[k]
        base = fmod(f * offset, 1.0)
        step = f % m
        if step < 0:
            step += m
        r = 0
        for j in range(m):
            ph = TWO_PI * (base + (<double> r) / (<double> m))
            out[j] = out[j] + c * (cos(ph) + 1j * sin(ph))
            r += step
            if r >= m:
                r -= m
    return out_arr


def direct_angle_eval(long long[::1] freqs, double complex[::1] coeffs,
                      double[::1] angles):
    """Evaluate sum_f c_f e^{2 pi i f t} at arbitrary turn angles t."""
    cdef Py_ssize_t nf = freqs.shape[0], na = angles.shape[0]
    out_arr = np.zeros(na, dtype=np.complex128)
    cdef double complex[::1] out = out_arr
    cdef Py_ssize_t k, j
    cdef double ph
    cdef double complex c
    for k in range(nf):
        c = coeffs[k]
        for j in range(na):
            ph = TWO_PI * fmod(freqs[k] * angles[j], 1.0)
            out[j] = out[j] + c * (cos(ph) + 1j * sin(ph))
    return out_arr
