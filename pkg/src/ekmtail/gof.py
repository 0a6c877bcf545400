"""Extreme Kolmogorov-Smirnov and Extreme Cramer-von Mises statistics against
the Pareto tail fitted with the censored Hill estimate.

Both statistics are evaluated exactly: the EKM estimate is a step function and
the fitted Pareto cdf ``G(s) = 1 - s^(-1/gamma_hat)`` is continuous and
increasing, so the supremum is attained at one-sided limits at the jumps and
the CvM integral has a closed form after substituting ``u = G(s)``.
"""

from dataclasses import dataclass

import numpy as np

from . import _kernels
from ._validation import check_int, check_positive
from .distributions import CensoredSample


@dataclass(frozen=True)
class GofResult:
    k: int
    gamma_hat: float
    ks: float
    cvm: float


def fitted_pareto_cdf(gamma_hat, s):
    """``1 - s^(-1/gamma_hat)`` for ``s >= 1``."""
    gamma_hat = check_positive(gamma_hat, "gamma_hat")
    s_arr = np.asarray(s, dtype=np.float64)
    if np.any(s_arr < 1.0):
        raise ValueError("fitted Pareto cdf is defined for s >= 1")
    with np.errstate(divide="ignore"):
        out = -np.expm1(-np.log(s_arr) / gamma_hat)
    return float(out) if out.ndim == 0 else out


def _pieces(est, gamma_hat):
    values = est.f.values
    g = fitted_pareto_cdf(gamma_hat, est.f.xs) if est.f.xs.size else np.empty(0)
    return values, np.atleast_1d(g)


def ks_statistic(est, gamma_hat, k=None):
    """``sqrt(k) * sup_{s >= 1} |F_{k,n}(s) - G(s)|``.

    Includes the limit ``s -> inf`` so a defective estimate is penalised by
    its missing mass.
    """
    k = est.k if k is None else k
    values, g = _pieces(est, gamma_hat)
    before = np.abs(values[:-1] - g)
    after = np.abs(values[1:] - g)
    tail = abs(values[-1] - 1.0)
    sup = max(tail, before.max(initial=0.0), after.max(initial=0.0))
    return float(np.sqrt(k) * sup)


def cvm_statistic(est, gamma_hat, k=None):
    """``k * int (F_{k,n} - G)^2 dG`` in closed form."""
    k = est.k if k is None else k
    values, g = _pieces(est, gamma_hat)
    u = np.concatenate(([0.0], g, [1.0]))
    a = values - u[:-1]
    b = values - u[1:]
    return float(k * np.sum((a**3 - b**3) / 3.0))


def _check_grid(k_grid, n):
    k_grid = np.atleast_1d(np.asarray(k_grid))
    if k_grid.size == 0:
        raise ValueError("empty k grid")
    if not np.issubdtype(k_grid.dtype, np.integer):
        if not np.all(k_grid == np.round(k_grid)):
            raise ValueError("k grid must contain integers")
        k_grid = k_grid.astype(np.int64)
    bad = (k_grid < 2) | (k_grid > n - 1)
    if np.any(bad):
        raise ValueError(f"k values must lie in [2, {n - 1}], got {k_grid[bad][:5].tolist()}")
    return k_grid.astype(np.int64)


def gof_arrays(sample, k_grid):
    """Columns ``(gamma_hat, ks, cvm)`` for each ``k`` in ``k_grid`` as an array."""
    if not isinstance(sample, CensoredSample):
        sample = CensoredSample(*sample)
    k_grid = _check_grid(k_grid, sample.n)
    z_desc, lz_desc, d_desc = _kernels.descending(sample)
    return k_grid, _kernels.gof_grid(z_desc, lz_desc, d_desc, k_grid)


def gof_curve(sample, k_grid):
    """Statistic-versus-``k`` trace, re-estimating ``gamma_hat`` at every ``k``.

    Views whose top ``k`` observations are all censored have no fitted tail;
    their statistics are reported as ``inf``.
    """
    k_grid, out = gof_arrays(sample, k_grid)
    order = np.argsort(k_grid, kind="stable")
    return [GofResult(int(k_grid[i]), float(out[i, 0]), float(out[i, 1]), float(out[i, 2])) for i in order]


def k_range(k_min, k_max, k_step=1):
    """Increasing grid ``k_max, k_max - k_step, ...`` down to ``k_min``; anchored at
    ``k_max`` so it is the lattice scanned by the selection rules."""
    k_min = check_int(k_min, "k_min", low=1)
    k_max = check_int(k_max, "k_max", low=k_min)
    k_step = check_int(k_step, "k_step", low=1)
    return np.arange(k_max, k_min - 1, -k_step, dtype=np.int64)[::-1].copy()
