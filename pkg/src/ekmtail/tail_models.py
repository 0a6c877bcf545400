"""Estimator classes following the scikit-learn API.

They wrap the functional interface so that tail fits work with ``clone`` and
``get_params`` like any other estimator. ``fit`` takes the observed values ``z`` and the censoring
indicators ``delta`` (1 = uncensored) in place of ``X`` and ``y``.
"""

import numpy as np
from sklearn.base import BaseEstimator
from sklearn.utils.validation import check_is_fitted

from ._validation import check_censored
from .distributions import CensoredSample
from .estimators import censored_hill, ekm_product, ena
from .gof import GofResult, cvm_statistic, ks_statistic
from .selection import SelectionConfig, select, select_rot
from .tail_empirical import sort_with_concomitants, top_k_view


class ExtremeKaplanMeier(BaseEstimator):
    """Extreme Kaplan-Meier and Nelson-Aalen estimates for a fixed ``k``.

    Parameters
    ----------
    k : int or None
        Number of top order statistics; None uses ``floor(0.2 n)``.

    Attributes
    ----------
    threshold_ : float
        The ``(k+1)``-th largest observation.
    ekm_ : EkmEstimate
    hazard_ : StepFunction
    gamma_ : float
        Censored Hill estimate of the tail index of X.
    """

    def __init__(self, k=None):
        self.k = k

    def fit(self, z, delta=None):
        z, delta = check_censored(z, delta)
        sample = CensoredSample(z, delta)
        k = select_rot(sample.n) if self.k is None else self.k
        view = top_k_view(sort_with_concomitants(sample), k)
        self.n_samples_ = sample.n
        self.k_ = view.k
        self.threshold_ = view.threshold
        self.view_ = view
        self.ekm_ = ekm_product(view)
        self.hazard_ = ena(view)
        self.gamma_ = censored_hill(view)
        return self

    def predict(self, s):
        """EKM distribution function at threshold-relative levels ``s >= 1``."""
        check_is_fitted(self, "ekm_")
        return self.ekm_.f(np.asarray(s, dtype=np.float64))

    def cumulative_hazard(self, s):
        check_is_fitted(self, "hazard_")
        return self.hazard_(np.asarray(s, dtype=np.float64))

    def survival(self, s):
        return 1.0 - self.predict(s)

    @property
    def defect_(self):
        check_is_fitted(self, "ekm_")
        return self.ekm_.defect

    def gof(self, gamma_hat=None):
        """Extreme KS and CvM statistics against the fitted Pareto tail."""
        check_is_fitted(self, "ekm_")
        g = self.gamma_ if gamma_hat is None else gamma_hat
        return GofResult(self.k_, g, ks_statistic(self.ekm_, g), cvm_statistic(self.ekm_, g))


class CensoredHillEstimator(BaseEstimator):
    """Censored Hill tail-index estimator with a data-driven choice of ``k``.

    With ``k`` set the estimate uses that many order statistics; otherwise
    ``rule`` (``"rot"``, ``"ks"`` or ``"cvm"``) picks ``k`` from the data.

    Attributes
    ----------
    k_ : int
    gamma_ : float
    selection_ : SelectionResult or None
        None when ``k`` was fixed.
    """

    def __init__(self, k=None, rule="rot", L=None, k_min=20, k_max=None, k_step=1,
                 fallback_fraction=0.2, full_trace=False, n_jobs=1):
        self.k = k
        self.rule = rule
        self.L = L
        self.k_min = k_min
        self.k_max = k_max
        self.k_step = k_step
        self.fallback_fraction = fallback_fraction
        self.full_trace = full_trace
        self.n_jobs = n_jobs

    def _config(self):
        return SelectionConfig(self.rule, self.L, self.k_min, self.k_max, self.k_step, self.fallback_fraction)

    def fit(self, z, delta=None):
        z, delta = check_censored(z, delta)
        sample = CensoredSample(z, delta)
        self.n_samples_ = sample.n
        if self.k is not None:
            view = top_k_view(sort_with_concomitants(sample), self.k)
            self.k_ = view.k
            self.gamma_ = censored_hill(view)
            self.selection_ = None
            self.used_fallback_ = False
        else:
            res = select(sample, self._config(), full_trace=self.full_trace, n_jobs=self.n_jobs)
            self.k_ = res.k_selected
            self.gamma_ = res.gamma_hat
            self.selection_ = res
            self.used_fallback_ = res.used_fallback
        return self

    def predict(self, z=None):
        """The fitted tail index (broadcast to ``len(z)`` when ``z`` is given)."""
        check_is_fitted(self, "gamma_")
        if z is None:
            return self.gamma_
        return np.full(len(z), self.gamma_)
