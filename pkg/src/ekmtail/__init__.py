"""Tail inference for randomly right-censored heavy-tailed data.

Extreme Kaplan-Meier and Nelson-Aalen estimates feed a censored Hill estimator
of the tail index; goodness-of-fit statistics of the fitted tail choose the
number of top order statistics, calibrated by simulating their Gaussian limit.
"""

from importlib import resources

from .distributions import (
    CensoredSample,
    DistributionSpec,
    TailParams,
    cdf,
    generate_censored,
    quantile,
    tail_params,
)
from .estimators import (
    EkmEstimate,
    censored_hill,
    classical_hill,
    ekm_from_ena,
    ekm_integral,
    ekm_product,
    ena,
    hill_asymptotic_variance,
)
from .gof import GofResult, cvm_statistic, fitted_pareto_cdf, gof_curve, ks_statistic
from .limit_process import (
    LimitPath,
    ekm_limit_variance,
    ena_limit_variance,
    gof_limit_sample,
    simulate_z_cholesky,
    simulate_z_construction,
    z_covariance,
)
from .selection import SelectionConfig, SelectionResult, select, select_gof, select_rot
from .stepfunction import StepFunction
from .tail_empirical import (
    SortedCensoredSample,
    TopKView,
    empirical_quantile,
    sort_with_concomitants,
    tail_empirical_fn,
    top_k_view,
)
from .tail_models import CensoredHillEstimator, ExtremeKaplanMeier

__version__ = "0.1.0"

__all__ = [
    "CensoredHillEstimator",
    "CensoredSample",
    "DistributionSpec",
    "EkmEstimate",
    "ExtremeKaplanMeier",
    "GofResult",
    "LimitPath",
    "SelectionConfig",
    "SelectionResult",
    "SortedCensoredSample",
    "StepFunction",
    "TailParams",
    "TopKView",
    "__version__",
    "cdf",
    "censored_hill",
    "classical_hill",
    "cvm_statistic",
    "ekm_from_ena",
    "ekm_integral",
    "ekm_limit_variance",
    "ekm_product",
    "empirical_quantile",
    "ena",
    "ena_limit_variance",
    "fitted_pareto_cdf",
    "fixture_path",
    "generate_censored",
    "gof_curve",
    "gof_limit_sample",
    "hill_asymptotic_variance",
    "ks_statistic",
    "quantile",
    "select",
    "select_gof",
    "select_rot",
    "simulate_z_cholesky",
    "simulate_z_construction",
    "sort_with_concomitants",
    "tail_empirical_fn",
    "tail_params",
    "top_k_view",
    "z_covariance",
]


def fixture_path(name="pareto_fixture.csv"):
    """Path of a CSV file bundled with the package."""
    return resources.files(__name__) / "data" / name
