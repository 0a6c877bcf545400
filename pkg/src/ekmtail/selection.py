"""Rules for choosing the number ``k`` of top order statistics.

* ``rot`` (rule of thumb): ``k = floor(0.2 n)``.
* ``ks``: the largest ``k`` whose extreme KS statistic is below ``L``.
* ``cvm``: the largest ``k`` whose extreme CvM statistic is below ``L``.

The GoF rules fall back to ``floor(fallback_fraction * n)`` when no candidate
qualifies. ``gamma_hat`` is re-estimated by censored Hill at every candidate.
"""

import math
from dataclasses import dataclass, field

import numpy as np
from joblib import Parallel, delayed

from . import _kernels
from ._validation import check_int
from .distributions import CensoredSample

RULES = ("rot", "ks", "cvm")

_RULE_ALIASES = {"rot": "rot", "s1": "rot", "ks": "ks", "s2": "ks", "cvm": "cvm", "cm": "cvm", "s3": "cvm"}

_COLUMN = {"ks": 1, "cvm": 2}


@dataclass(frozen=True)
class SelectionConfig:
    """Parameters of a selection rule.

    ``k_max=None`` means ``floor(n/2)``; ``L`` is ignored by ``rot``.
    """

    rule: str = "rot"
    L: float | None = None
    k_min: int = 20
    k_max: int | None = None
    k_step: int = 1
    fallback_fraction: float = 0.2

    def __post_init__(self):
        rule = _RULE_ALIASES.get(str(self.rule).lower())
        if rule is None:
            raise ValueError(f"unknown rule {self.rule!r}; expected one of {RULES}")
        object.__setattr__(self, "rule", rule)
        if rule != "rot":
            if self.L is None or np.isnan(self.L) or self.L < 0:
                raise ValueError(f"rule {rule!r} needs a threshold L >= 0")
            object.__setattr__(self, "L", float(self.L))
        if not 0 < self.fallback_fraction < 1:
            raise ValueError("fallback_fraction must lie in (0, 1)")

    @property
    def label(self):
        return self.rule if self.rule == "rot" else f"{self.rule}(L={self.L:g})"

    def k_bounds(self, n):
        """Validated ``(k_min, k_max, k_step)`` for a sample of size ``n``."""
        k_max = n // 2 if self.k_max is None else self.k_max
        k_min = check_int(self.k_min, "k_min", low=2)
        k_max = check_int(k_max, "k_max", low=k_min, high=n - 1)
        return k_min, k_max, check_int(self.k_step, "k_step", low=1)

    def to_dict(self):
        return {
            "rule": self.rule,
            "L": self.L,
            "k_min": self.k_min,
            "k_max": self.k_max,
            "k_step": self.k_step,
            "fallback_fraction": self.fallback_fraction,
        }

    @classmethod
    def from_dict(cls, d):
        return cls(**d)


@dataclass(frozen=True)
class SelectionResult:
    """Chosen ``k`` with its censored Hill estimate.

    ``trace`` has rows ``(k, statistic, gamma_hat)`` in scan order (decreasing
    ``k``); it is empty for the rule of thumb.
    """

    k_selected: int
    gamma_hat: float
    used_fallback: bool
    rule: str
    L: float | None = None
    trace: np.ndarray = field(default_factory=lambda: np.empty((0, 3)), repr=False)

    def to_dict(self, with_trace=False):
        d = {
            "rule": self.rule,
            "L": self.L,
            "k_selected": self.k_selected,
            "gamma_hat": self.gamma_hat,
            "used_fallback": self.used_fallback,
        }
        if with_trace:
            d["trace"] = [{"k": int(k), "statistic": float(s), "gamma_hat": float(g)} for k, s, g in self.trace]
        return d


def _floor_fraction(fraction, n):
    # round first so 0.2 * n does not lose an integer to representation error
    return int(math.floor(round(fraction * n, 9)))


def select_rot(n):
    """Rule of thumb ``k = floor(0.2 n)``; needs ``n >= 10``."""
    n = check_int(n, "n", low=10)
    return _floor_fraction(0.2, n)


def _as_sample(sample):
    return sample if isinstance(sample, CensoredSample) else CensoredSample(*sample)


def _chunks(a, n_chunks):
    return [c for c in np.array_split(a, n_chunks) if c.size]


def select(sample, config, full_trace=False, n_jobs=1):
    """Apply any rule (``rot``, ``ks`` or ``cvm``) to ``sample``."""
    sample = _as_sample(sample)
    if config.rule == "rot":
        n = sample.n
        k = select_rot(n)
        z_desc, lz_desc, d_desc = _kernels.descending(sample)
        return SelectionResult(k, _kernels.censored_hill_at_k(z_desc, lz_desc, d_desc, k), False, "rot")
    return select_gof(sample, config, full_trace=full_trace, n_jobs=n_jobs)


def select_gof(sample, config, full_trace=False, n_jobs=1):
    """Largest ``k`` in the scanned grid whose GoF statistic is strictly below ``L``.

    The grid runs from ``k_max`` down to ``k_min`` in steps of ``k_step``. By
    default the scan stops at the first hit; ``full_trace=True`` evaluates the
    whole grid (in parallel when ``n_jobs != 1``) and keeps it in ``trace``.
    Both modes select the same ``k``.
    """
    sample = _as_sample(sample)
    if config.rule == "rot":
        raise ValueError("select_gof needs a 'ks' or 'cvm' rule")
    n = sample.n
    k_min, k_max, k_step = config.k_bounds(n)
    grid = np.arange(k_max, k_min - 1, -k_step, dtype=np.int64)
    z_desc, lz_desc, d_desc = _kernels.descending(sample)
    column = _COLUMN[config.rule]
    if full_trace:
        if n_jobs == 1:
            out = _kernels.gof_grid(z_desc, lz_desc, d_desc, grid)
        else:
            parts = Parallel(n_jobs=n_jobs)(
                delayed(_kernels.gof_grid)(z_desc, lz_desc, d_desc, chunk) for chunk in _chunks(grid, 4 * abs(n_jobs))
            )
            out = np.vstack(parts)
        hits = np.flatnonzero(out[:, column] < config.L)
        hit = int(hits[0]) if hits.size else -1
    else:
        out, hit = _kernels.scan_descending(z_desc, lz_desc, d_desc, grid, column, config.L)
    trace = np.column_stack((grid[: out.shape[0]].astype(np.float64), out[:, column], out[:, 0]))
    if hit >= 0:
        return SelectionResult(int(grid[hit]), float(out[hit, 0]), False, config.rule, config.L, trace)
    k = min(max(_floor_fraction(config.fallback_fraction, n), 1), n - 1)
    gamma = _kernels.censored_hill_at_k(z_desc, lz_desc, d_desc, k)
    return SelectionResult(k, float(gamma), True, config.rule, config.L, trace)
