"""Heavy-tailed families, their distribution/quantile functions and the
random right-censoring generator.

Three families are supported, all in the Frechet domain of attraction:

* ``pareto``  - exact Pareto, ``1 - F(x) = x^(-1/gamma)`` for ``x >= 1``;
* ``frechet`` - ``F(x) = exp(-x^(-1/gamma))`` (unit scale);
* ``burr``    - ``F(x) = 1 - (1 + x^tau)^(-alpha)`` with ``gamma = 1/(alpha*tau)``.
"""

from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq

from ._random import make_rng, open_uniform
from ._validation import check_int, check_positive

FAMILIES = ("pareto", "frechet", "burr")

_ALIASES = {
    "pareto": "pareto",
    "exactpareto": "pareto",
    "exact_pareto": "pareto",
    "frechet": "frechet",
    "fréchet": "frechet",
    "burr": "burr",
}


@dataclass(frozen=True)
class DistributionSpec:
    """A member of one of the supported families.

    For ``burr`` either ``tau`` or ``gamma`` may be given; the other is
    derived from ``gamma = 1/(alpha*tau)``.
    """

    family: str
    gamma: float
    alpha: float = 1.0
    tau: float | None = None

    def __post_init__(self):
        family = _ALIASES.get(str(self.family).lower())
        if family is None:
            raise ValueError(f"unknown family {self.family!r}; expected one of {FAMILIES}")
        object.__setattr__(self, "family", family)
        gamma = check_positive(self.gamma, "gamma")
        object.__setattr__(self, "gamma", gamma)
        if family == "burr":
            alpha = check_positive(self.alpha, "alpha")
            object.__setattr__(self, "alpha", alpha)
            if self.tau is None:
                object.__setattr__(self, "tau", 1.0 / (alpha * gamma))
            else:
                tau = check_positive(self.tau, "tau")
                if not np.isclose(gamma, 1.0 / (alpha * tau), rtol=1e-9, atol=0.0):
                    raise ValueError(
                        f"inconsistent Burr parameters: gamma={gamma} but 1/(alpha*tau)={1.0 / (alpha * tau)}"
                    )
                object.__setattr__(self, "tau", tau)

    @classmethod
    def pareto(cls, gamma):
        return cls("pareto", gamma)

    @classmethod
    def frechet(cls, gamma):
        return cls("frechet", gamma)

    @classmethod
    def burr(cls, gamma=None, alpha=1.0, tau=None):
        if gamma is None:
            if tau is None:
                raise ValueError("Burr needs gamma or tau")
            gamma = 1.0 / (alpha * tau)
        return cls("burr", gamma, alpha=alpha, tau=tau)

    @classmethod
    def from_dict(cls, d):
        d = dict(d)
        return cls(d.pop("family"), **d)

    def to_dict(self):
        d = {"family": self.family, "gamma": self.gamma}
        if self.family == "burr":
            d.update(alpha=self.alpha, tau=self.tau)
        return d

    def quantile(self, u):
        return quantile(self, u)

    def cdf(self, x):
        return cdf(self, x)

    def survival(self, x):
        return survival(self, x)


@dataclass(frozen=True)
class CensoredSample:
    """Observed pairs ``(z_i, delta_i)``; ``delta`` is True when uncensored."""

    z: np.ndarray
    delta: np.ndarray

    def __post_init__(self):
        z = np.asarray(self.z, dtype=np.float64)
        delta = np.asarray(self.delta)
        if z.ndim != 1 or delta.ndim != 1:
            raise ValueError("z and delta must be 1-D")
        if z.shape != delta.shape:
            raise ValueError(f"length mismatch: {z.shape[0]} observations, {delta.shape[0]} indicators")
        if z.shape[0] < 1:
            raise ValueError("empty sample")
        if not np.all(np.isfinite(z)) or np.any(z <= 0):
            raise ValueError("all observations must be finite and strictly positive")
        if delta.dtype != bool:
            if not np.all(np.isin(delta, (0, 1))):
                raise ValueError("delta must contain only 0/1 or booleans")
            delta = delta.astype(bool)
        object.__setattr__(self, "z", z)
        object.__setattr__(self, "delta", delta)

    @property
    def n(self):
        return self.z.shape[0]

    @property
    def censoring_rate(self):
        return 1.0 - float(np.mean(self.delta))

    def scaled(self, c):
        return CensoredSample(self.z * c, self.delta.copy())

    def __len__(self):
        return self.n


@dataclass(frozen=True)
class TailParams:
    """Tail index of ``Z``, the two marginal indices and the tail non-censoring rate."""

    gamma_x: float
    gamma_y: float
    gamma: float
    p: float


def tail_params(gamma_x, gamma_y):
    """Tail index ``gamma`` of ``min(X, Y)`` and the limiting fraction ``p`` of
    uncensored observations in the tail."""
    gx = check_positive(gamma_x, "gamma_x")
    gy = check_positive(gamma_y, "gamma_y")
    return TailParams(gamma_x=gx, gamma_y=gy, gamma=gx * gy / (gx + gy), p=gy / (gx + gy))


def _check_unit_open(u):
    u = np.asarray(u, dtype=np.float64)
    if np.any(~((u > 0) & (u < 1))):
        raise ValueError("quantile level must lie in the open interval (0, 1)")
    return u


def _scalar_or_array(x):
    return float(x) if np.ndim(x) == 0 else x


def quantile(spec, u):
    """Inverse distribution function of ``spec`` at level(s) ``u`` in (0, 1)."""
    u = _check_unit_open(u)
    g = spec.gamma
    if spec.family == "pareto":
        out = np.exp(-g * np.log1p(-u))
    elif spec.family == "frechet":
        out = (-np.log(u)) ** (-g)
    else:
        out = np.expm1(-np.log1p(-u) / spec.alpha) ** (1.0 / spec.tau)
    return _scalar_or_array(out)


def _check_positive_x(x):
    x = np.asarray(x, dtype=np.float64)
    if np.any(~(x > 0)):
        raise ValueError("cdf argument must be strictly positive")
    return x


def cdf(spec, x):
    """Distribution function of ``spec`` at ``x > 0``."""
    x = _check_positive_x(x)
    g = spec.gamma
    if spec.family == "pareto":
        out = np.where(x >= 1.0, -np.expm1(-np.log(np.maximum(x, 1.0)) / g), 0.0)
    elif spec.family == "frechet":
        out = np.exp(-(x ** (-1.0 / g)))
    else:
        out = -np.expm1(-spec.alpha * np.log1p(x**spec.tau))
    return _scalar_or_array(out)


def survival(spec, x):
    """``1 - cdf``, computed without cancellation in the far tail."""
    x = _check_positive_x(x)
    g = spec.gamma
    if spec.family == "pareto":
        out = np.where(x >= 1.0, np.maximum(x, 1.0) ** (-1.0 / g), 1.0)
    elif spec.family == "frechet":
        out = -np.expm1(-(x ** (-1.0 / g)))
    else:
        out = np.exp(-spec.alpha * np.log1p(x**spec.tau))
    return _scalar_or_array(out)


def sample(spec, n, rng):
    return np.asarray(quantile(spec, open_uniform(rng, n)))


def generate_censored(spec_x, spec_y, n, seed):
    """Draw ``n`` pairs ``Z = min(X, Y)``, ``delta = X <= Y`` with X, Y independent.

    ``seed`` is either an integer or a tuple ``(seed, stream, ...)`` addressing an
    independent substream; the same seed always reproduces the same sample.
    """
    n = check_int(n, "n", low=1)
    seed = seed if isinstance(seed, tuple) else (seed,)
    rng = make_rng(*seed)
    u_x = open_uniform(rng, n)
    u_y = open_uniform(rng, n)
    x = np.asarray(quantile(spec_x, u_x))
    y = np.asarray(quantile(spec_y, u_y))
    return CensoredSample(np.minimum(x, y), x <= y)


def z_survival(spec_x, spec_y, x):
    return survival(spec_x, x) * survival(spec_y, x)


def z_quantile(spec_x, spec_y, level):
    """Quantile of ``Z = min(X, Y)``, e.g. the deterministic threshold
    ``u_n = F_Z^{-1}(1 - k/n)``."""
    if not 0 < level < 1:
        raise ValueError("level must lie in (0, 1)")
    target = 1.0 - level

    def f(logx):
        return np.log(z_survival(spec_x, spec_y, np.exp(logx))) - np.log(target)

    lo, hi = -1.0, 1.0
    while f(lo) < 0:
        lo *= 2
    while f(hi) > 0:
        hi *= 2
    return float(np.exp(brentq(f, lo, hi, xtol=1e-14, rtol=1e-14)))
