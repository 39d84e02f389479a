# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled beta-mixture kernels.

Mirrors ``pnskit._kernels_py``: min-direction stratum CDF/PDF mixtures,
the weighted mixing bijection g, its bisection inverse, and the bisection
solver for the stratified binomial likelihood.  Inputs are assumed valid.
"""

import numpy as np

cimport numpy as cnp

cnp.import_array()

cdef double G_TOL = 1e-12
cdef double BRACKET_EPS = 1e-12
cdef int MAX_ITER = 200
cdef int M_CAP = 64


cdef double _binom(int n, int k) noexcept:
    cdef double out = 1.0
    cdef int j
    if k > n - k:
        k = n - k
    for j in range(k):
        out = out * (n - j) / (j + 1)
    return out


cdef double _beta_cdf(double x, int i, int m) noexcept:
    cdef double s = 0.0
    cdef int j
    if x <= 0.0:
        return 0.0
    if x >= 1.0:
        return 1.0
    for j in range(i, m + 1):
        s += _binom(m, j) * x ** j * (1.0 - x) ** (m - j)
    return s


cdef double _beta_pdf(double x, int i, int m) noexcept:
    cdef double xa = 1.0
    cdef double xb = 1.0
    if i > 1 or x > 0.0:
        xa = x ** (i - 1)
    if i < m or x < 1.0:
        xb = (1.0 - x) ** (m - i)
    return i * _binom(m, i) * xa * xb


cdef double _stratum_cdf(double x, int r, int m) noexcept:
    cdef double s = 0.0
    cdef int i
    for i in range(1, r + 1):
        s += _beta_cdf(x, i, m)
    return s / r


cdef double _stratum_pdf(double x, int r, int m) noexcept:
    cdef double s = 0.0
    cdef int i
    for i in range(1, r + 1):
        s += _beta_pdf(x, i, m)
    return s / r


cdef void _fill_coeffs(double[::1] q, int m, double* w, double* a) noexcept:
    # w_i = sum_{r>=i} q_r / r ; a_j = C(m, j) * (w_1 + ... + w_j)
    cdef int i
    cdef double acc = 0.0
    for i in range(m - 1, -1, -1):
        acc += q[i] / (i + 1)
        w[i] = acc
    acc = 0.0
    for i in range(m):
        acc += w[i]
        a[i] = _binom(m, i + 1) * acc


cdef double _g_poly(double x, double* a, int m) noexcept:
    cdef double y = 1.0 - x
    cdef double yp[65]
    cdef double s = 0.0
    cdef double xp = 1.0
    cdef int j
    yp[0] = 1.0
    for j in range(1, m):
        yp[j] = yp[j - 1] * y
    for j in range(1, m + 1):
        xp *= x
        s += a[j - 1] * xp * yp[m - j]
    return s


def beta_cdf(double x, int i, int m):
    return _beta_cdf(x, i, m)


def beta_pdf(double x, int i, int m):
    return _beta_pdf(x, i, m)


def stratum_cdf(double x, int r, int m):
    return _stratum_cdf(x, r, m)


def stratum_pdf(double x, int r, int m):
    return _stratum_pdf(x, r, m)


def g_mix(double x, double[::1] q):
    cdef int m = q.shape[0]
    cdef double w[64]
    cdef double a[64]
    if x <= 0.0:
        return 0.0
    if x >= 1.0:
        return 1.0
    _fill_coeffs(q, m, w, a)
    return _g_poly(x, a, m)


def g_mix_deriv(double x, double[::1] q):
    cdef int m = q.shape[0]
    cdef double w[64]
    cdef double a[64]
    cdef double s = 0.0
    cdef int i
    _fill_coeffs(q, m, w, a)
    for i in range(1, m + 1):
        s += w[i - 1] * _beta_pdf(x, i, m)
    return s


cdef double _g_invert_one(double u, double* a, int m) noexcept:
    cdef double lo = 0.0
    cdef double hi = 1.0
    cdef double mid
    cdef int it
    if u <= 0.0:
        return 0.0
    if u >= 1.0:
        return 1.0
    for it in range(MAX_ITER):
        mid = 0.5 * (lo + hi)
        if _g_poly(mid, a, m) < u:
            lo = mid
        else:
            hi = mid
        if hi - lo <= 1e-15:
            break
    return 0.5 * (lo + hi)


def g_inverse(double u, double[::1] q):
    cdef int m = q.shape[0]
    cdef double w[64]
    cdef double a[64]
    _fill_coeffs(q, m, w, a)
    return _g_invert_one(u, a, m)


def g_inverse_batch(double[::1] u, double[::1] q):
    cdef int m = q.shape[0]
    cdef Py_ssize_t k = u.shape[0]
    cdef double w[64]
    cdef double a[64]
    cdef Py_ssize_t idx
    _fill_coeffs(q, m, w, a)
    out_arr = np.empty(k, dtype=np.float64)
    cdef double[::1] out = out_arr
    for idx in range(k):
        out[idx] = _g_invert_one(u[idx], a, m)
    return out_arr


cdef double _ml_score(double p, double* yr, double* nr, int m) noexcept:
    # One O(m) pass: binomial pmf terms t_j = C(m,j) p^j (1-p)^(m-j) give the
    # order-statistic CDFs as suffix sums; the matching densities reuse the
    # same power tables through i*C(m,i) = m*C(m-1,i-1).
    cdef double y = 1.0 - p
    cdef double xp[65]
    cdef double yp[65]
    cdef double t[65]
    cdef double suffix[66]
    cdef double s = 0.0
    cdef double c, cumF, cumf, F, f, term
    cdef int j, r
    xp[0] = 1.0
    yp[0] = 1.0
    for j in range(1, m + 1):
        xp[j] = xp[j - 1] * p
        yp[j] = yp[j - 1] * y
    c = 1.0
    t[0] = yp[m]
    for j in range(1, m + 1):
        c = c * (m - j + 1) / j
        t[j] = c * xp[j] * yp[m - j]
    suffix[m + 1] = 0.0
    for j in range(m, 0, -1):
        suffix[j] = suffix[j + 1] + t[j]
    cumF = 0.0
    cumf = 0.0
    c = 1.0  # C(m-1, r-1)
    for r in range(1, m + 1):
        cumF += suffix[r]
        cumf += m * c * xp[r - 1] * yp[m - r]
        c = c * (m - r) / r
        if nr[r - 1] <= 0.0:
            continue
        F = cumF / r
        f = cumf / r
        term = 0.0
        if yr[r - 1] > 0.0:
            term += yr[r - 1] / F
        if nr[r - 1] - yr[r - 1] > 0.0:
            if F >= 1.0:
                return -1e308
            term -= (nr[r - 1] - yr[r - 1]) / (1.0 - F)
        s += term * f
    return s


cdef double _ml_root_one(double* yr, double* nr, int m) noexcept:
    cdef double lo = BRACKET_EPS
    cdef double hi = 1.0 - BRACKET_EPS
    cdef double mid
    cdef double ty = 0.0
    cdef double tn = 0.0
    cdef int r, it
    for r in range(m):
        ty += yr[r]
        tn += nr[r]
    if ty <= 0.0:
        return 0.0
    if ty >= tn:
        return 1.0
    for it in range(MAX_ITER):
        mid = 0.5 * (lo + hi)
        if _ml_score(mid, yr, nr, m) > 0.0:
            lo = mid
        else:
            hi = mid
        if hi - lo <= G_TOL:
            break
    return 0.5 * (lo + hi)


def ml_root(cnp.int64_t[::1] yr, cnp.int64_t[::1] nr):
    cdef int m = yr.shape[0]
    cdef double y[64]
    cdef double n[64]
    cdef int r
    for r in range(m):
        y[r] = yr[r]
        n[r] = nr[r]
    return _ml_root_one(y, n, m)


def ml_root_batch(cnp.int64_t[:, ::1] yr, cnp.int64_t[:, ::1] nr):
    cdef Py_ssize_t k = yr.shape[0]
    cdef int m = yr.shape[1]
    cdef double y[64]
    cdef double n[64]
    cdef Py_ssize_t idx
    cdef int r
    out_arr = np.empty(k, dtype=np.float64)
    cdef double[::1] out = out_arr
    for idx in range(k):
        for r in range(m):
            y[r] = yr[idx, r]
            n[r] = nr[idx, r]
        out[idx] = _ml_root_one(y, n, m)
    return out_arr
