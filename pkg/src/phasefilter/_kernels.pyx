# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled lag-product kernels.  Semantics match ``_kernels_py`` exactly."""

import numpy as np
cimport numpy as cnp

cnp.import_array()


def lag_products(const double complex[::1] a, const double complex[::1] b):
    cdef Py_ssize_t n = a.shape[0]
    if b.shape[0] != n:
        raise ValueError("inputs must have equal length")
    out_arr = np.zeros((n, n), dtype=np.complex128)
    cdef double complex[:, ::1] out = out_arr
    cdef Py_ssize_t half = n // 2
    cdef Py_ssize_t j, s, smax, col
    cdef double ar, ai, br, bi
    with nogil:
        for j in range(n):
            smax = j if j < n - 1 - j else n - 1 - j
            if smax > half - 1:
                smax = half - 1
            for s in range(-smax, smax + 1):
                ar = a[j - s].real
                ai = a[j - s].imag
                br = b[j + s].real
                bi = b[j + s].imag
                col = s if s >= 0 else n + s
                out[j, col].real = ar * br + ai * bi
                out[j, col].imag = ar * bi - ai * br
    return out_arr


def shifted_products(const double complex[::1] a, const double complex[::1] b, Py_ssize_t offset):
    cdef Py_ssize_t n = a.shape[0]
    if b.shape[0] != n:
        raise ValueError("inputs must have equal length")
    out_arr = np.zeros((n, n), dtype=np.complex128)
    cdef double complex[:, ::1] out = out_arr
    cdef Py_ssize_t j, jp, i
    cdef double ar, ai, br, bi
    with nogil:
        for j in range(n):
            for jp in range(n):
                i = j - jp + offset
                if i < 0 or i >= n:
                    continue
                ar = a[jp].real
                ai = a[jp].imag
                br = b[i].real
                bi = b[i].imag
                out[j, jp].real = ar * br + ai * bi
                out[j, jp].imag = ai * br - ar * bi
    return out_arr
