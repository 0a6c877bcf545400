"""The limiting Gaussian martingale ``Z`` of the ENA/EKM processes.

``Z`` lives on ``(0, 1]`` with ``Cov(Z(s), Z(t)) = p (1/max(s, t) - 1)``. It is
simulated in two independent ways: from two Brownian motions (bridge terms
plus a trapezoidal integral of ``W_perp(u)/u^2``), and by exact Gaussian
factorisation of the covariance matrix. Functionals of the paths give the
limit laws of the extreme KS and CvM statistics.
"""

from dataclasses import dataclass

import numpy as np
from joblib import Parallel, delayed

from ._random import make_rng
from ._validation import check_int

BLOCK_SIZE = 1024
BLOCK_CELLS = 2_000_000


@dataclass(frozen=True)
class LimitPath:
    grid: np.ndarray
    values: np.ndarray


def _check_p(p):
    if not 0.0 < p <= 1.0:
        raise ValueError(f"p must lie in (0, 1], got {p}")
    return float(p)


def _check_grid(grid, allow_one=True):
    grid = np.atleast_1d(np.asarray(grid, dtype=np.float64))
    if grid.size == 0:
        raise ValueError("empty grid")
    if np.any(np.diff(grid) <= 0):
        raise ValueError("grid must be strictly increasing")
    upper_ok = grid[-1] <= 1.0 if allow_one else grid[-1] < 1.0
    if grid[0] <= 0.0 or not upper_ok:
        raise ValueError("grid points must lie in (0, 1]" if allow_one else "grid points must lie in (0, 1)")
    return grid


def z_covariance(s, t, p):
    """``Cov(Z(s), Z(t)) = p * (min(1/s, 1/t) - 1)``."""
    p = _check_p(p)
    s = np.asarray(s, dtype=np.float64)
    t = np.asarray(t, dtype=np.float64)
    if np.any((s <= 0) | (s > 1) | (t <= 0) | (t > 1)):
        raise ValueError("arguments must lie in (0, 1]")
    out = p * (np.minimum(1.0 / s, 1.0 / t) - 1.0)
    return float(out) if out.ndim == 0 else out


def ena_limit_variance(s, params):
    """Variance of ``Z(T(s))``, the limit of ``sqrt(k)(Lambda_{k,n}(s) - Lambda(s))``."""
    s = np.asarray(s, dtype=np.float64)
    if np.any(s < 1.0):
        raise ValueError("s must be at least 1")
    out = params.p * (s ** (1.0 / params.gamma) - 1.0)
    return float(out) if out.ndim == 0 else out


def ekm_limit_variance(s, params):
    """Variance of ``(1 - F(s)) Z(T(s))``, the EKM analogue."""
    s = np.asarray(s, dtype=np.float64)
    out = s ** (-2.0 / params.gamma_x) * ena_limit_variance(s, params)
    return float(out) if np.ndim(out) == 0 else out


def default_grid(points=2000, lower=1e-4):
    """Logarithmically spaced grid on ``[lower, 1]``, denser where ``Var Z`` blows up."""
    points = check_int(points, "points", low=2)
    return np.logspace(np.log10(lower), 0.0, points)


def _refine(grid, resolution):
    """Union of ``grid``, ``{1}`` and a log grid of ``resolution`` points on ``[min(grid), 1]``."""
    parts = [grid, [1.0]]
    if resolution:
        parts.append(np.logspace(np.log10(grid[0]), 0.0, resolution))
    fine = np.unique(np.concatenate(parts))
    return fine, np.searchsorted(fine, grid)


def _construction_block(p, fine, n_paths, rng):
    dt = np.diff(fine, prepend=0.0)
    w = np.cumsum(rng.standard_normal((n_paths, fine.size)) * np.sqrt(dt), axis=1)
    w_perp = np.cumsum(rng.standard_normal((n_paths, fine.size)) * np.sqrt(dt), axis=1)
    bridge = w - fine * w[:, -1:]
    bridge_perp = w_perp - fine * w_perp[:, -1:]
    f = w_perp / fine**2
    segments = 0.5 * (f[:, 1:] + f[:, :-1]) * np.diff(fine)
    # integral from t to 1 of W_perp(u)/u^2 du
    tail_integral = np.zeros_like(f)
    tail_integral[:, :-1] = np.cumsum(segments[:, ::-1], axis=1)[:, ::-1]
    c = np.sqrt(p * (1.0 - p))
    return (p * bridge + c * bridge_perp) / fine - c * tail_integral


def _cholesky_factor(p, grid):
    cov = z_covariance(grid[:, None], grid[None, :], p)
    try:
        return np.linalg.cholesky(cov)
    except np.linalg.LinAlgError as exc:
        raise ValueError("covariance matrix is not positive definite on this grid") from exc


def _blocks(n_paths, grid_size):
    # the block layout depends only on (n_paths, grid_size), never on n_jobs
    size = max(1, min(BLOCK_SIZE, BLOCK_CELLS // grid_size))
    starts = range(0, n_paths, size)
    return [(b, min(size, n_paths - s)) for b, s in enumerate(starts)]


def sample_z_paths(p, grid, n_paths, seed, method="construction", resolution=2000, n_jobs=1):
    """``n_paths`` draws of ``(Z(t))_{t in grid}`` as an array of shape ``(n_paths, len(grid))``.

    Paths are generated in fixed blocks with their own random stream
    ``(seed, block)``, so the output does not depend on ``n_jobs``.

    ``method="construction"`` integrates on the union of ``grid`` and a log grid
    with ``resolution`` points; ``method="cholesky"`` draws exactly from the
    finite-dimensional law and needs ``grid`` inside ``(0, 1)``.
    """
    p = _check_p(p)
    n_paths = check_int(n_paths, "n_paths", low=1)
    if method == "construction":
        grid = _check_grid(grid)
        fine, idx = _refine(grid, resolution)

        def run(block, size):
            return _construction_block(p, fine, size, make_rng(seed, block))[:, idx]

    elif method == "cholesky":
        grid = _check_grid(grid, allow_one=False)
        chol = _cholesky_factor(p, grid)

        def run(block, size):
            return make_rng(seed, block).standard_normal((size, grid.size)) @ chol.T

    else:
        raise ValueError(f"unknown method {method!r}")
    jobs = _blocks(n_paths, fine.size if method == "construction" else grid.size)
    if n_jobs == 1 or len(jobs) == 1:
        parts = [run(b, size) for b, size in jobs]
    else:
        parts = Parallel(n_jobs=n_jobs)(delayed(run)(b, size) for b, size in jobs)
    return np.vstack(parts)


def simulate_z_construction(p, grid, seed, resolution=2000):
    """One path of ``Z`` built from two independent Brownian motions."""
    grid = _check_grid(grid)
    values = sample_z_paths(p, grid, 1, seed, method="construction", resolution=resolution)[0]
    return LimitPath(grid, values)


def simulate_z_cholesky(p, grid, seed):
    """One exact draw of ``Z`` on ``grid`` via the Cholesky factor of its covariance."""
    grid = _check_grid(grid, allow_one=False)
    values = sample_z_paths(p, grid, 1, seed, method="cholesky")[0]
    return LimitPath(grid, values)


def gof_limit_functionals(paths, grid, p):
    """KS and CvM limit functionals of simulated paths on ``grid``.

    KS: ``sup_t t^p |Z(t)|``, since ``1 - F(s) = T(s)^p``.
    CvM: ``int_0^1 (1-u)^2 Z((1-u)^(1/p))^2 du = int_0^1 p t^(3p-1) Z(t)^2 dt``,
    integrated by the trapezoidal rule over ``grid``; the piece below
    ``grid[0]`` is dropped.
    """
    weighted = grid**p * np.abs(paths)
    ks = weighted.max(axis=1)
    integrand = p * grid ** (3.0 * p - 1.0) * paths**2
    cvm = np.sum(0.5 * (integrand[:, 1:] + integrand[:, :-1]) * np.diff(grid), axis=1)
    return ks, cvm


def gof_limit_sample(p, grid=None, n_paths=10_000, seed=0, n_jobs=1):
    """Samples ``(ks_limit, cvm_limit)`` of the limit laws of the extreme GoF statistics.

    The KS supremum over a finite grid undershoots the true supremum; refine
    ``grid`` to reduce that bias. Quantiles of these samples are a principled
    way to choose the selection threshold ``L``.
    """
    p = _check_p(p)
    grid = default_grid() if grid is None else _check_grid(grid)
    if grid[-1] != 1.0:
        grid = np.append(grid, 1.0)
    jobs = _blocks(check_int(n_paths, "n_paths", low=1), grid.size)
    # blocks are reduced to functionals immediately to bound memory on fine grids
    if n_jobs == 1 or len(jobs) == 1:
        parts = [_limit_block(p, grid, size, seed, b) for b, size in jobs]
    else:
        parts = Parallel(n_jobs=n_jobs)(delayed(_limit_block)(p, grid, size, seed, b) for b, size in jobs)
    return np.concatenate([ks for ks, _ in parts]), np.concatenate([cvm for _, cvm in parts])


def _limit_block(p, grid, size, seed, block):
    paths = _construction_block(p, grid, size, make_rng(seed, block))
    return gof_limit_functionals(paths, grid, p)

