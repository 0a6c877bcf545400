"""Seeded Monte Carlo experiments: finite-sample behaviour of the ENA/EKM
processes and MSE of the censored Hill estimator under each selection rule.

Replication ``r`` of an experiment draws its sample from the random stream
``(master_seed, n, r)``, so results do not depend on how replications are
distributed over workers. Aggregates use ``math.fsum`` and are therefore also
independent of the order in which replications finish.
"""

import math
from dataclasses import dataclass, field

import numpy as np
from joblib import Parallel, delayed

from . import _kernels
from ._validation import check_int
from .distributions import DistributionSpec, generate_censored, tail_params
from .estimators import ekm_product, ena
from .limit_process import ekm_limit_variance, ena_limit_variance
from .selection import SelectionConfig, select
from .tail_empirical import sort_with_concomitants, top_k_view


@dataclass(frozen=True)
class ExperimentSpec:
    spec_x: DistributionSpec
    spec_y: DistributionSpec
    n: int | tuple = 10_000
    reps: int = 500
    master_seed: int = 0
    s_list: tuple = (2.0, 4.0)
    k_grid: tuple | None = None
    rules: tuple = ()

    def __post_init__(self):
        ns = (self.n,) if np.ndim(self.n) == 0 else tuple(self.n)
        for n in ns:
            check_int(n, "n", low=100)
        check_int(self.reps, "reps", low=1)
        if any(s <= 1 for s in self.s_list):
            raise ValueError("evaluation points must exceed 1")
        object.__setattr__(self, "s_list", tuple(float(s) for s in self.s_list))
        object.__setattr__(self, "rules", tuple(self.rules))

    @property
    def sizes(self):
        return (self.n,) if np.ndim(self.n) == 0 else tuple(self.n)

    @classmethod
    def from_dict(cls, d):
        d = dict(d)
        rules = tuple(SelectionConfig.from_dict(r) for r in d.pop("rules", ()))
        k_grid = d.pop("k_grid", None)
        return cls(
            spec_x=DistributionSpec.from_dict(d.pop("x")),
            spec_y=DistributionSpec.from_dict(d.pop("y")),
            n=tuple(d["n"]) if isinstance(d.get("n"), list) else d.get("n", 10_000),
            reps=d.get("reps", 500),
            master_seed=d.get("master_seed", 0),
            s_list=tuple(d.get("s_list", (2.0, 4.0))),
            k_grid=None if k_grid is None else tuple(k_grid),
            rules=rules,
        )


def default_k_grid(n, points=30, k_lo=50):
    """Geometric grid of about ``points`` distinct integers from ``k_lo`` to ``n/2``."""
    k_hi = n // 2
    k_lo = min(k_lo, k_hi)
    return np.unique(np.round(np.geomspace(k_lo, k_hi, points)).astype(np.int64))


def _fsum_mean(x, axis=0):
    x = np.moveaxis(np.asarray(x, dtype=np.float64), axis, 0)
    flat = x.reshape(x.shape[0], -1)
    out = np.array([math.fsum(col) for col in flat.T]) / x.shape[0]
    return out.reshape(x.shape[1:])


def _fsum_var(x, axis=0):
    x = np.moveaxis(np.asarray(x, dtype=np.float64), axis, 0)
    if x.shape[0] < 2:
        return np.full(x.shape[1:], np.nan)
    mean = _fsum_mean(x)
    return _fsum_mean((x - mean) ** 2) * x.shape[0] / (x.shape[0] - 1)


def _run(fn, jobs, n_jobs):
    if n_jobs == 1:
        return [fn(*j) for j in jobs]
    return Parallel(n_jobs=n_jobs)(delayed(fn)(*j) for j in jobs)


@dataclass
class FiniteSampleCurves:
    """Mean/variance across replications of the scaled ENA/EKM errors.

    Arrays are indexed ``[k, s]``. Variances are NaN when ``reps == 1``.
    """

    n: int
    reps: int
    k_grid: np.ndarray
    s_list: np.ndarray
    ena_mean: np.ndarray
    ena_var: np.ndarray
    ekm_mean: np.ndarray
    ekm_var: np.ndarray
    ena_var_limit: np.ndarray
    ekm_var_limit: np.ndarray

    def rows(self):
        for i, k in enumerate(self.k_grid):
            for j, s in enumerate(self.s_list):
                yield {
                    "n": self.n,
                    "k": int(k),
                    "s": float(s),
                    "ena_mean": self.ena_mean[i, j],
                    "ena_var": self.ena_var[i, j],
                    "ena_var_limit": self.ena_var_limit[j],
                    "ekm_mean": self.ekm_mean[i, j],
                    "ekm_var": self.ekm_var[i, j],
                    "ekm_var_limit": self.ekm_var_limit[j],
                    "reps": self.reps,
                }


def _finite_sample_rep(spec, n, rep, k_grid, s_arr, lam0, f0):
    sample = generate_censored(spec.spec_x, spec.spec_y, n, (spec.master_seed, n, rep))
    srt = sort_with_concomitants(sample)
    ena_err = np.empty((k_grid.size, s_arr.size))
    ekm_err = np.empty_like(ena_err)
    for i, k in enumerate(k_grid):
        view = top_k_view(srt, int(k))
        root_k = math.sqrt(k)
        ena_err[i] = root_k * (ena(view)(s_arr) - lam0)
        ekm_err[i] = root_k * (ekm_product(view)(s_arr) - f0)
    return ena_err, ekm_err


def finite_sample_study(spec, n=None, k_grid=None, n_jobs=1):
    """Empirical mean and variance of ``sqrt(k)(Lambda_{k,n} - Lambda)(s)`` and
    ``sqrt(k)(F_{k,n} - F)(s)`` over replications, with the limit variances.

    The centring uses the exact Pareto tail of X: ``Lambda(s) = log(s)/gamma_x``
    and ``F(s) = 1 - s^(-1/gamma_x)``.
    """
    n = spec.sizes[0] if n is None else n
    if k_grid is None:
        k_grid = spec.k_grid if spec.k_grid is not None else default_k_grid(n)
    k_grid = np.asarray(k_grid, dtype=np.int64)
    s_arr = np.asarray(spec.s_list)
    gx = spec.spec_x.gamma
    params = tail_params(gx, spec.spec_y.gamma)
    lam0 = np.log(s_arr) / gx
    f0 = -np.expm1(-np.log(s_arr) / gx)
    jobs = [(spec, n, r, k_grid, s_arr, lam0, f0) for r in range(spec.reps)]
    results = _run(_finite_sample_rep, jobs, n_jobs)
    ena_all = np.stack([r[0] for r in results])
    ekm_all = np.stack([r[1] for r in results])
    return FiniteSampleCurves(
        n=n,
        reps=spec.reps,
        k_grid=k_grid,
        s_list=s_arr,
        ena_mean=_fsum_mean(ena_all),
        ena_var=_fsum_var(ena_all),
        ekm_mean=_fsum_mean(ekm_all),
        ekm_var=_fsum_var(ekm_all),
        ena_var_limit=np.atleast_1d(ena_limit_variance(s_arr, params)),
        ekm_var_limit=np.atleast_1d(ekm_limit_variance(s_arr, params)),
    )


@dataclass
class MseRow:
    n: int
    rule: str
    L: float | None
    mse100: float
    reps: int
    mean_k: float
    fallback_rate: float


@dataclass
class MseTable:
    """``100 x`` mean squared error of the censored Hill estimate of ``gamma_x``."""

    gamma_x: float
    rows: list = field(default_factory=list)

    def value(self, n, rule, L=None):
        for row in self.rows:
            if row.n == n and row.rule == rule and (rule == "rot" or row.L == L):
                return row.mse100
        raise KeyError((n, rule, L))


def _mse_rep(spec, n, rep, rules):
    sample = generate_censored(spec.spec_x, spec.spec_y, n, (spec.master_seed, n, rep))
    out = np.empty((len(rules), 3))
    for j, cfg in enumerate(rules):
        res = select(sample, cfg)
        out[j] = (res.gamma_hat, res.k_selected, res.used_fallback)
    return out


def mse_study(spec, rules=None, n_jobs=1):
    """``100 x MSE`` of censored Hill at the ``k`` chosen by each rule, for every ``n``."""
    rules = tuple(spec.rules if rules is None else rules)
    if not rules:
        raise ValueError("at least one selection rule is required")
    gx = spec.spec_x.gamma
    table = MseTable(gamma_x=gx)
    for n in spec.sizes:
        jobs = [(spec, n, r, rules) for r in range(spec.reps)]
        per_rep = np.stack(_run(_mse_rep, jobs, n_jobs))
        for j, cfg in enumerate(rules):
            sq = (per_rep[:, j, 0] - gx) ** 2
            table.rows.append(
                MseRow(
                    n=n,
                    rule=cfg.rule,
                    L=cfg.L,
                    mse100=100.0 * math.fsum(sq) / spec.reps,
                    reps=spec.reps,
                    mean_k=math.fsum(per_rep[:, j, 1]) / spec.reps,
                    fallback_rate=math.fsum(per_rep[:, j, 2]) / spec.reps,
                )
            )
    return table


def hill_replications(spec, n, k, n_jobs=1):
    """Censored Hill estimates at fixed ``k`` for each replication."""
    jobs = [(spec, n, r, k) for r in range(spec.reps)]
    return np.array(_run(_hill_rep, jobs, n_jobs))


def _hill_rep(spec, n, rep, k):
    sample = generate_censored(spec.spec_x, spec.spec_y, n, (spec.master_seed, n, rep))
    z_desc, lz_desc, d_desc = _kernels.descending(sample)
    return _kernels.censored_hill_at_k(z_desc, lz_desc, d_desc, k)
