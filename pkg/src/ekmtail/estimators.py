"""Extreme Nelson-Aalen and Extreme Kaplan-Meier estimators, EKM integrals and
the censored Hill estimator.

All estimators act on a :class:`~ekmtail.tail_empirical.TopKView`. Ratios
equal to 1 (observations tied with the threshold) carry no mass: every
estimator integrates over ``(1, t]``.
"""

from dataclasses import dataclass

import numpy as np

from ._validation import check_positive
from .stepfunction import StepFunction


@dataclass(frozen=True)
class EkmEstimate:
    """EKM distribution function on ``[1, inf)``.

    ``masses`` are the jump sizes at ``f.xs``; they are kept separately because
    ``S(x-) * delta/i`` is more accurate than differencing ``f``.
    """

    f: StepFunction
    masses: np.ndarray
    k: int
    threshold: float

    @property
    def defect(self):
        return 1.0 - self.f.terminal_value

    def __call__(self, x):
        return self.f(x)


def _ascending_events(view):
    """Counted ranks in ascending-ratio order: (ratios, ranks, deltas)."""
    keep = view.ratios > 1.0
    ratios = view.ratios[keep][::-1]
    ranks = view.ranks[keep][::-1]
    deltas = view.deltas[keep][::-1]
    return ratios, ranks, deltas


def _group_last(locs):
    """Index of the last element of each run of equal values in sorted ``locs``."""
    if locs.size == 0:
        return np.empty(0, dtype=np.intp)
    change = np.flatnonzero(np.diff(locs) != 0)
    return np.append(change, locs.size - 1)


def ena(view):
    """Extreme Nelson-Aalen cumulative hazard.

    A jump of ``1/i`` at every uncensored ratio, ``i`` being the rank from the
    top; identical to ``-int_1^t dT1(s) / T(s-)`` for the tail empirical
    functions of the view.
    """
    ratios, ranks, deltas = _ascending_events(view)
    ratios, ranks = ratios[deltas], ranks[deltas]
    increments = 1.0 / ranks
    cum = np.cumsum(increments)
    last = _group_last(ratios)
    return StepFunction(ratios[last], cum[last], initial_value=0.0)


def ekm_product(view):
    """Extreme Kaplan-Meier estimator in product form.

    ``F(x) = 1 - prod_{i <= k} (1 - delta_i / i)^{I(ratio_i <= x)}``, sweeping the
    ranks from ``k`` down to 1 so the factors multiply in ascending-ratio order.
    """
    ratios, ranks, deltas = _ascending_events(view)
    ratios, ranks = ratios[deltas], ranks[deltas]
    hazard = 1.0 / ranks
    surv = np.cumprod(1.0 - hazard)
    surv_before = np.concatenate(([1.0], surv[:-1]))
    masses = surv_before * hazard
    return _make_estimate(ratios, surv, masses, view.k, view.threshold)


def _make_estimate(locs, surv, masses, k, threshold):
    last = _group_last(locs)
    if last.size:
        grouped = np.add.reduceat(masses, np.concatenate(([0], last[:-1] + 1)))
    else:
        grouped = masses[:0]
    f = StepFunction(locs[last], 1.0 - surv[last], initial_value=0.0)
    return EkmEstimate(f, grouped, k, threshold)


def ekm_from_ena(hazard, k=None, threshold=None):
    """EKM as the discrete product integral ``1 - prod_{s <= t} (1 - dLambda(s))``."""
    d_lambda = hazard.jumps
    if np.any(d_lambda > 1.0 + 1e-12):
        raise ValueError("cumulative hazard has a jump larger than 1")
    if np.any(d_lambda < 0):
        raise ValueError("cumulative hazard must be non-decreasing")
    d_lambda = np.minimum(d_lambda, 1.0)
    surv = np.cumprod(1.0 - d_lambda)
    surv_before = np.concatenate(([1.0], surv[:-1]))
    masses = surv_before * d_lambda
    f = StepFunction(hazard.xs, 1.0 - surv, initial_value=0.0)
    return EkmEstimate(f, masses, k, threshold)


def ekm_integral(est, phi):
    """``int phi dF`` over the jumps of the EKM estimate; the defect gets no weight."""
    xs = est.f.xs
    if xs.size == 0:
        return 0.0
    try:
        values = np.asarray(phi(xs), dtype=np.float64)
        if values.shape != xs.shape:
            raise ValueError
    except (TypeError, ValueError):
        values = np.array([phi(float(x)) for x in xs], dtype=np.float64)
    if not np.all(np.isfinite(values)):
        raise ValueError("phi is not finite at every jump location")
    return float(np.dot(values, est.masses))


def censored_hill(view):
    """Censored Hill estimator ``int log(t) dF_{k,n}(t)`` of the tail index of X."""
    return ekm_integral(ekm_product(view), np.log)


def classical_hill(view):
    """Hill estimator ignoring the censoring indicators."""
    return float(np.mean(np.log(view.ratios)))


def hill_asymptotic_variance(gamma_x, p):
    """Asymptotic variance ``gamma_x^2 p / (2p - 1)`` of the censored Hill estimator.

    Only defined for ``p > 1/2``.
    """
    gamma_x = check_positive(gamma_x, "gamma_x")
    if not 0.5 < p <= 1.0:
        raise ValueError(f"p must lie in (1/2, 1], got {p}")
    return gamma_x**2 * p / (2.0 * p - 1.0)
