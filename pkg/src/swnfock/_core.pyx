# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled numeric kernels; see ``_pycore`` for the reference versions."""

import numpy as np

from libc.math cimport log1p, atan2


cdef double _pairwise(double[::1] a, Py_ssize_t lo, Py_ssize_t n) nogil:
    cdef Py_ssize_t i, m
    cdef double s
    if n <= 8:
        s = 0.0
        for i in range(lo, lo + n):
            s += a[i]
        return s
    m = (n // 2 + 7) & ~7
    if m >= n:
        m = n // 2
    return _pairwise(a, lo, m) + _pairwise(a, lo + m, n - m)


def log_terms(w, vol):
    cdef double complex[::1] wv = np.ascontiguousarray(w, dtype=np.complex128)
    cdef double[::1] vv = np.ascontiguousarray(vol, dtype=np.float64)
    cdef Py_ssize_t n = wv.shape[0], k
    out = np.empty(n, dtype=np.complex128)
    cdef double complex[::1] ov = out
    cdef double ur, ui
    for k in range(n):
        ur = 4.0 * wv[k].real
        ui = 4.0 * wv[k].imag
        ov[k] = vv[k] * (0.5 * log1p(-2.0 * ur + ur * ur + ui * ui)) \
            + 1j * (vv[k] * atan2(-ui, 1.0 - ur))
    return out


def log_sum(w, vol):
    cdef double complex[::1] wv = np.ascontiguousarray(w, dtype=np.complex128)
    cdef double[::1] vv = np.ascontiguousarray(vol, dtype=np.float64)
    cdef Py_ssize_t n = wv.shape[0], k
    if n == 0:
        return 0j
    cdef double[::1] re = np.empty(n)
    cdef double[::1] im = np.empty(n)
    cdef double ur, ui, sr, si
    with nogil:
        for k in range(n):
            ur = 4.0 * wv[k].real
            ui = 4.0 * wv[k].imag
            re[k] = vv[k] * (0.5 * log1p(-2.0 * ur + ur * ur + ui * ui))
            im[k] = vv[k] * atan2(-ui, 1.0 - ur)
        sr = _pairwise(re, 0, n)
        si = _pairwise(im, 0, n)
    return complex(sr, si)


def series_coeffs(w, t, double c, Py_ssize_t M):
    cdef double complex[::1] wv = np.ascontiguousarray(w, dtype=np.complex128)
    cdef double[::1] tv = np.ascontiguousarray(t, dtype=np.float64)
    out = np.zeros(M + 1, dtype=np.complex128)
    cdef double complex[::1] acc = out
    cdef double complex[::1] q = np.zeros(M + 1, dtype=np.complex128)
    cdef Py_ssize_t k, n, m, j
    cdef double a
    cdef double complex wk, s
    acc[0] = 1.0
    with nogil:
        for k in range(wv.shape[0]):
            wk = wv[k]
            if wk.real == 0.0 and wk.imag == 0.0:
                continue
            a = 2.0 * c * tv[k]
            q[0] = 1.0
            for n in range(1, M + 1):
                q[n] = q[n - 1] * wk * (a + 4.0 * (n - 1)) / n
            for m in range(M, 0, -1):
                s = acc[m]
                for j in range(1, m + 1):
                    s = s + acc[m - j] * q[j]
                acc[m] = s
    return out
