"""Pure-numpy fallback for the beta-mixture kernels.

Same call signatures and semantics as the compiled ``pnskit._kernels``
extension.  All functions assume validated inputs (min direction, weights
summing to one); validation and the max-direction reflection live in the
public wrappers.

The mixture g(x) = sum_r q_r * (1/r) sum_{i<=r} B(x; i, m+1-i) collapses to
a single binomial-weighted polynomial

    g(x) = sum_{j=1..m} a_j x^j (1-x)^(m-j),   a_j = C(m,j) * W_j,

with w_i = sum_{r>=i} q_r / r and W_j = w_1 + ... + w_j, which is what the
batched routines evaluate.
"""

from __future__ import annotations

from math import comb

import numpy as np

G_TOL = 1e-12
BRACKET_EPS = 1e-12
MAX_ITER = 200


def beta_cdf(x: float, i: int, m: int) -> float:
    """CDF of Beta(i, m+1-i) at x via the exact binomial sum."""
    if x <= 0.0:
        return 0.0
    if x >= 1.0:
        return 1.0
    s = 0.0
    for j in range(i, m + 1):
        s += comb(m, j) * x**j * (1.0 - x) ** (m - j)
    return s


def beta_pdf(x: float, i: int, m: int) -> float:
    """Density of Beta(i, m+1-i) at x, with 0**0 == 1 at the endpoints."""
    xa = x ** (i - 1) if (i > 1 or x > 0.0) else 1.0
    xb = (1.0 - x) ** (m - i) if (i < m or x < 1.0) else 1.0
    return i * comb(m, i) * xa * xb


def stratum_cdf(x: float, r: int, m: int) -> float:
    """Min-direction stratum CDF: uniform mixture of the r lowest order stats."""
    return sum(beta_cdf(x, i, m) for i in range(1, r + 1)) / r


def stratum_pdf(x: float, r: int, m: int) -> float:
    return sum(beta_pdf(x, i, m) for i in range(1, r + 1)) / r


def _mix_weights(q: np.ndarray) -> np.ndarray:
    """Per-order-statistic weights w_i = sum_{r>=i} q_r / r."""
    m = q.shape[0]
    r = np.arange(1, m + 1)
    return np.cumsum((q / r)[::-1])[::-1]


def _g_coeffs(q: np.ndarray) -> np.ndarray:
    """Coefficients a_j (j = 1..m) of g as a Bernstein-like polynomial."""
    m = q.shape[0]
    w = _mix_weights(q)
    cw = np.cumsum(w)
    j = np.arange(1, m + 1)
    return np.array([comb(m, int(k)) for k in j]) * cw


def g_mix(x: float, q: np.ndarray) -> float:
    if x <= 0.0:
        return 0.0
    if x >= 1.0:
        return 1.0
    return float(_g_vec(np.array([x]), _g_coeffs(q))[0])


def g_mix_deriv(x: float, q: np.ndarray) -> float:
    m = q.shape[0]
    w = _mix_weights(q)
    return float(sum(w[i - 1] * beta_pdf(x, i, m) for i in range(1, m + 1)))


def _g_vec(x: np.ndarray, coeffs: np.ndarray) -> np.ndarray:
    m = coeffs.shape[0]
    out = np.zeros_like(x)
    for j in range(1, m + 1):
        out += coeffs[j - 1] * x**j * (1.0 - x) ** (m - j)
    return out


def g_inverse(u: float, q: np.ndarray) -> float:
    return float(g_inverse_batch(np.array([u]), q)[0])


def g_inverse_batch(u: np.ndarray, q: np.ndarray) -> np.ndarray:
    """Invert g on [0, 1] by bisection, elementwise over u."""
    coeffs = _g_coeffs(q)
    u = np.asarray(u, dtype=np.float64)
    lo = np.zeros_like(u)
    hi = np.ones_like(u)
    for _ in range(MAX_ITER):
        mid = 0.5 * (lo + hi)
        below = _g_vec(mid, coeffs) < u
        lo = np.where(below, mid, lo)
        hi = np.where(below, hi, mid)
        if np.all(hi - lo <= 1e-15):
            break
    x = 0.5 * (lo + hi)
    x[u <= 0.0] = 0.0
    x[u >= 1.0] = 1.0
    return x


def _stratum_cdf_vec(x: np.ndarray, m: int) -> np.ndarray:
    """Stack of min-direction stratum CDFs, shape (m,) + x.shape."""
    bc = np.empty((m,) + x.shape)
    for i in range(1, m + 1):
        acc = np.zeros_like(x)
        for j in range(i, m + 1):
            acc += comb(m, j) * x**j * (1.0 - x) ** (m - j)
        bc[i - 1] = acc
    return np.cumsum(bc, axis=0) / np.arange(1, m + 1).reshape((m,) + (1,) * x.ndim)


def _stratum_pdf_vec(x: np.ndarray, m: int) -> np.ndarray:
    bp = np.empty((m,) + x.shape)
    for i in range(1, m + 1):
        bp[i - 1] = i * comb(m, i) * x ** (i - 1) * (1.0 - x) ** (m - i)
    return np.cumsum(bp, axis=0) / np.arange(1, m + 1).reshape((m,) + (1,) * x.ndim)


def ml_root(yr: np.ndarray, nr: np.ndarray) -> float:
    return float(ml_root_batch(yr.reshape(1, -1), nr.reshape(1, -1))[0])


def ml_root_batch(yr: np.ndarray, nr: np.ndarray) -> np.ndarray:
    """Maximizer of the stratified binomial log-likelihood, row-wise.

    ``yr`` and ``nr`` are integer arrays of shape (k, m): per-stratum success
    and trial counts.  The score is strictly decreasing by concavity, so a
    sign bisection on [eps, 1-eps] converges unconditionally; all-zero and
    all-full rows return the exact boundary values.
    """
    yr = np.asarray(yr, dtype=np.float64)
    nr = np.asarray(nr, dtype=np.float64)
    k, m = yr.shape
    lo = np.full(k, BRACKET_EPS)
    hi = np.full(k, 1.0 - BRACKET_EPS)
    for _ in range(MAX_ITER):
        mid = 0.5 * (lo + hi)
        F = _stratum_cdf_vec(mid, m)  # (m, k)
        f = _stratum_pdf_vec(mid, m)
        with np.errstate(divide="ignore", invalid="ignore"):
            term = (
                np.where(yr.T > 0, yr.T / F, 0.0)
                - np.where((nr - yr).T > 0, (nr - yr).T / (1.0 - F), 0.0)
            ) * f
        score = term.sum(axis=0)
        pos = score > 0.0
        lo = np.where(pos, mid, lo)
        hi = np.where(pos, hi, mid)
        if np.all(hi - lo <= G_TOL):
            break
    out = 0.5 * (lo + hi)
    total_y = yr.sum(axis=1)
    total_n = nr.sum(axis=1)
    out[total_y <= 0.0] = 0.0
    out[total_y >= total_n] = 1.0
    return out
