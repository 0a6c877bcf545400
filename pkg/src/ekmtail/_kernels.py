"""Compiled kernels for scanning the number of top order statistics.

Scanning ``k`` over a grid costs ``O(k)`` per candidate; these loops replace the
array-based reference path in ``estimators``/``gof`` inside selection and
Monte Carlo code. Tests pin them to the reference path.
"""

import math

import numpy as np
from numba import njit


@njit(cache=True)
def gof_at_k(z_desc, lz_desc, d_desc, k, xbuf, cbuf):
    """Censored Hill, KS and CvM statistics for the top-``k`` view.

    ``z_desc``/``d_desc`` are the sample sorted in decreasing order with their
    indicators and ``lz_desc = log(z_desc)``; ``xbuf``/``cbuf`` are scratch
    arrays of length >= ``k``. Returns ``(gamma_hat, ks, cvm)``; both
    statistics are ``inf`` when no uncensored ratio exceeds 1.
    """
    thr = z_desc[k]
    lthr = lz_desc[k]
    surv = 1.0
    gamma = 0.0
    m = 0
    last_z = 0.0
    for i in range(k, 0, -1):
        z = z_desc[i - 1]
        if z > thr and d_desc[i - 1]:
            h = 1.0 / i
            logr = lz_desc[i - 1] - lthr
            gamma += surv * h * logr
            surv *= 1.0 - h
            if m > 0 and z == last_z:
                cbuf[m - 1] = 1.0 - surv
            else:
                xbuf[m] = logr
                cbuf[m] = 1.0 - surv
                m += 1
                last_z = z
    if m == 0 or gamma <= 0.0:
        return gamma, np.inf, np.inf
    inv = 1.0 / gamma
    sup = 0.0
    cvm = 0.0
    prev = 0.0
    u_prev = 0.0
    for j in range(m):
        g = -math.expm1(-inv * xbuf[j])
        c = cbuf[j]
        sup = max(sup, abs(prev - g), abs(c - g))
        a = prev - u_prev
        b = prev - g
        cvm += (a * a * a - b * b * b) / 3.0
        prev = c
        u_prev = g
    sup = max(sup, abs(prev - 1.0))
    a = prev - u_prev
    b = prev - 1.0
    cvm += (a * a * a - b * b * b) / 3.0
    return gamma, math.sqrt(k) * sup, k * cvm


@njit(cache=True)
def gof_grid(z_desc, lz_desc, d_desc, k_grid):
    n_k = k_grid.shape[0]
    out = np.empty((n_k, 3))
    kmax = 1
    for idx in range(n_k):
        kmax = max(kmax, k_grid[idx])
    xbuf = np.empty(kmax)
    cbuf = np.empty(kmax)
    for idx in range(n_k):
        g, ks, cvm = gof_at_k(z_desc, lz_desc, d_desc, k_grid[idx], xbuf, cbuf)
        out[idx, 0] = g
        out[idx, 1] = ks
        out[idx, 2] = cvm
    return out


@njit(cache=True)
def scan_descending(z_desc, lz_desc, d_desc, k_grid, column, L):
    """Walk ``k_grid`` (decreasing) until the statistic in ``column`` drops below ``L``.

    Returns the trace rows computed so far and the position of the hit
    (``-1`` when no candidate qualifies).
    """
    n_k = k_grid.shape[0]
    out = np.empty((n_k, 3))
    kmax = 1
    for idx in range(n_k):
        kmax = max(kmax, k_grid[idx])
    xbuf = np.empty(kmax)
    cbuf = np.empty(kmax)
    for idx in range(n_k):
        g, ks, cvm = gof_at_k(z_desc, lz_desc, d_desc, k_grid[idx], xbuf, cbuf)
        out[idx, 0] = g
        out[idx, 1] = ks
        out[idx, 2] = cvm
        if out[idx, column] < L:
            return out[: idx + 1], idx
    return out, -1


@njit(cache=True)
def censored_hill_at_k(z_desc, lz_desc, d_desc, k):
    thr = z_desc[k]
    surv = 1.0
    gamma = 0.0
    for i in range(k, 0, -1):
        if z_desc[i - 1] > thr and d_desc[i - 1]:
            h = 1.0 / i
            gamma += surv * h * (lz_desc[i - 1] - lz_desc[k])
            surv *= 1.0 - h
    return gamma


def descending(sample):
    """``(z, log z, delta)`` sorted in decreasing order of ``z``.

    Ties are kept in reverse stable order, matching
    ``top_k_view(sort_with_concomitants(sample), k)`` for every ``k``.
    """
    order = np.argsort(sample.z, kind="stable")[::-1]
    z = np.ascontiguousarray(sample.z[order])
    return z, np.log(z), np.ascontiguousarray(sample.delta[order])
