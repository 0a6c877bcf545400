"""Order statistics with concomitant censoring indicators, the top-k view
relative to the random threshold ``Z_{n-k,n}``, and tail empirical functions."""

from dataclasses import dataclass

import numpy as np

from ._validation import check_int
from .distributions import CensoredSample
from .stepfunction import StepFunction


@dataclass(frozen=True)
class SortedCensoredSample:
    z_sorted: np.ndarray
    delta_concomitant: np.ndarray

    @property
    def n(self):
        return self.z_sorted.shape[0]


@dataclass(frozen=True)
class TopKView:
    """The ``k`` largest observations divided by the threshold ``Z_{n-k,n}``.

    ``ratios[i-1]`` is the rank-``i`` ratio counted from the top (rank 1 is the
    sample maximum), so ``ratios`` is non-increasing. ``deltas`` are the
    concomitant indicators.
    """

    k: int
    threshold: float
    ratios: np.ndarray
    deltas: np.ndarray

    def __post_init__(self):
        ratios = np.asarray(self.ratios, dtype=np.float64)
        deltas = np.asarray(self.deltas, dtype=bool)
        if ratios.shape != (self.k,) or deltas.shape != (self.k,):
            raise ValueError(f"expected {self.k} ratios and indicators")
        if self.k < 1:
            raise ValueError("k must be at least 1")
        if np.any(ratios < 1.0):
            raise ValueError("ratios must be at least 1")
        if np.any(np.diff(ratios) > 0):
            raise ValueError("ratios must be ordered from the largest down")
        object.__setattr__(self, "ratios", ratios)
        object.__setattr__(self, "deltas", deltas)

    @classmethod
    def from_ratios(cls, ratios, deltas, threshold=1.0):
        """Build a view from ratios given in any order (sorted descending here)."""
        ratios = np.asarray(ratios, dtype=np.float64)
        deltas = np.asarray(deltas, dtype=bool)
        order = np.argsort(-ratios, kind="stable")
        return cls(len(ratios), float(threshold), ratios[order], deltas[order])

    @property
    def ranks(self):
        return np.arange(1, self.k + 1)


def sort_with_concomitants(sample):
    """Stable ascending sort of ``z`` carrying each indicator with its value."""
    if not isinstance(sample, CensoredSample):
        sample = CensoredSample(*sample)
    order = np.argsort(sample.z, kind="stable")
    return SortedCensoredSample(sample.z[order], sample.delta[order])


def top_k_view(sorted_sample, k):
    """Top-``k`` view with threshold ``Z_{n-k,n}``; requires ``1 <= k <= n-1``."""
    if isinstance(sorted_sample, CensoredSample):
        sorted_sample = sort_with_concomitants(sorted_sample)
    n = sorted_sample.n
    k = check_int(k, "k", low=1, high=n - 1)
    threshold = sorted_sample.z_sorted[n - k - 1]
    top = sorted_sample.z_sorted[n - k :][::-1]
    return TopKView(k, float(threshold), top / threshold, sorted_sample.delta_concomitant[n - k :][::-1])


def tail_empirical_fn(view, with_delta=False):
    """Tail empirical (sub)distribution function with random level.

    Returns ``s -> (1/k) #{i : ratio_i > s}`` (restricted to uncensored ranks
    when ``with_delta``) as a non-increasing right-continuous step function.
    """
    mask = view.ratios > 1.0
    if with_delta:
        mask &= view.deltas
    r = np.sort(view.ratios[mask])
    locs, first = np.unique(r, return_index=True)
    # number of counted ratios strictly above each distinct location
    above = r.size - np.append(first[1:], r.size) if r.size else r
    return StepFunction(locs, above / view.k, initial_value=r.size / view.k)


def empirical_quantile(sorted_sample, k, t, u_n):
    """``Z_{n-[kt],n} / u_n`` for a known deterministic threshold ``u_n``."""
    if isinstance(sorted_sample, CensoredSample):
        sorted_sample = sort_with_concomitants(sorted_sample)
    n = sorted_sample.n
    if u_n <= 0:
        raise ValueError("u_n must be positive")
    j = int(np.floor(k * t))
    if j < 0 or j > n - 1:
        raise ValueError(f"floor(k*t)={j} is outside [0, {n - 1}]")
    return float(sorted_sample.z_sorted[n - j - 1] / u_n)
