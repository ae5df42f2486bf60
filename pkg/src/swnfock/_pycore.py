"""Pure-Python/numpy implementations of the numeric kernels.

Mirrors the compiled ``_core`` extension function for function; used when
the extension is not built.
"""

import numpy as np


def log_terms(w, vol):
    """Per-cell ``vol * log(1 - 4 w)`` on the principal branch."""
    w = np.asarray(w, dtype=np.complex128)
    ur = 4.0 * w.real
    ui = 4.0 * w.imag
    # log|1 - u| via log1p keeps accuracy for small u
    re = 0.5 * np.log1p(-2.0 * ur + ur * ur + ui * ui)
    im = np.arctan2(-ui, 1.0 - ur)
    vol = np.asarray(vol, dtype=np.float64)
    return vol * re + 1j * (vol * im)


def _pairwise(a):
    n = a.shape[0]
    if n <= 8:
        s = 0.0
        for x in a:
            s += x
        return s
    m = (n // 2 + 7) & ~7
    if m >= n:
        m = n // 2
    return _pairwise(a[:m]) + _pairwise(a[m:])


def log_sum(w, vol):
    """``sum_k vol_k * log(1 - 4 w_k)`` with pairwise summation."""
    t = log_terms(w, vol)
    if t.size == 0:
        return 0j
    return complex(_pairwise(np.ascontiguousarray(t.real)), _pairwise(np.ascontiguousarray(t.imag)))


def series_coeffs(w, t, c, M):
    """Coefficients of ``prod_k sum_n q_{k,n} z^n`` up to ``z^M``.

    ``q_{k,0} = 1`` and ``q_{k,n} = q_{k,n-1} * w_k * (2 c t_k + 4 (n - 1)) / n``,
    the normalised single-cell creator-power norms.
    """
    w = np.asarray(w, dtype=np.complex128)
    t = np.asarray(t, dtype=np.float64)
    M = int(M)
    acc = [0j] * (M + 1)
    acc[0] = 1 + 0j
    q = [0j] * (M + 1)
    for k in range(w.shape[0]):
        wk = complex(w[k])
        if wk == 0:
            continue
        a = 2.0 * c * float(t[k])
        q[0] = 1 + 0j
        for n in range(1, M + 1):
            q[n] = q[n - 1] * wk * (a + 4.0 * (n - 1)) / n
        for m in range(M, 0, -1):
            s = acc[m]
            for j in range(1, m + 1):
                s += acc[m - j] * q[j]
            acc[m] = s
    return np.array(acc, dtype=np.complex128)
