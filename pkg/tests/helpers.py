"""Shared builders for random estimator inputs."""

import math

import numpy as np
from scipy import integrate

from ekmtail import TopKView, fitted_pareto_cdf


def random_view(rng, k=None, censor_prob=None, k_max=200):
    """Top-k view with continuous ratios > 1 and random indicators."""
    if k is None:
        k = int(rng.integers(1, k_max + 1))
    if censor_prob is None:
        censor_prob = rng.uniform(0.0, 0.9)
    ratios = 1.0 + rng.pareto(rng.uniform(0.5, 4.0), size=k) + 1e-9
    deltas = rng.random(k) >= censor_prob
    return TopKView.from_ratios(ratios, deltas, threshold=float(rng.uniform(0.5, 50.0)))


def ks_dense_oracle(est, gamma_hat, points=10**6):
    """sqrt(k) * max |F - G| over a uniform grid in u = G(s) plus probes on both sides of every jump."""
    u = np.arange(points) / points
    s = np.exp(-gamma_hat * np.log1p(-u))
    xs = est.f.xs
    probes = np.concatenate((xs * (1 - 1e-13), xs, [1e300]))
    s = np.concatenate((s, probes[probes >= 1.0]))
    return math.sqrt(est.k) * np.max(np.abs(est.f(s) - fitted_pareto_cdf(gamma_hat, s)))


def cvm_quad_oracle(est, gamma_hat):
    """k * int_1^inf (F - G)^2 dG with adaptive quadrature between jumps.

    Integrates over t = log(s), where dG = exp(-t/gamma_hat)/gamma_hat dt.
    """
    edges = np.concatenate(([0.0], np.log(est.f.xs), [np.inf]))
    total = 0.0
    for a, b, level in zip(edges[:-1], edges[1:], est.f.values):
        f = lambda t: (level + math.expm1(-t / gamma_hat)) ** 2 * math.exp(-t / gamma_hat) / gamma_hat
        val, _ = integrate.quad(f, a, b, epsabs=1e-14, epsrel=1e-12, limit=200)
        total += val
    return est.k * total
