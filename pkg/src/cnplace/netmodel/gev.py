"""Generalized extreme value distribution, Hosking parameterization.

Quantile function::

    x(F) = mu + sigma * (1 - (-log F)**k) / k      (k != 0)
    x(F) = mu - sigma * log(-log F)                 (k == 0, Gumbel)

The shape ``k`` is the negative of the shape used by most other software
(``k > 0`` gives a bounded upper tail).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .lmoments import DegenerateSample, LMoments
from .rng import open_uniform, stream

EULER_GAMMA = 0.5772156649015329
SMALL_K = 1e-8


class FitError(ValueError):
    pass


@dataclass(frozen=True)
class GevParams:
    mu: float
    sigma: float
    k: float

    def __post_init__(self):
        if not self.sigma > 0:
            raise ValueError(f"GEV scale must be positive, got {self.sigma}")

    def to_dict(self) -> dict:
        return {"mu": self.mu, "sigma": self.sigma, "k": self.k}


def fit_gev(lm: LMoments) -> GevParams:
    """L-moment estimator with Hosking's rational approximation for ``k``."""
    try:
        lm.require_ratios()
    except DegenerateSample as exc:
        raise FitError(str(exc)) from None
    if not abs(lm.t3) < 1:
        raise FitError(f"L-skewness must lie in (-1, 1), got {lm.t3}")
    c = 2.0 / (3.0 + lm.t3) - math.log(2) / math.log(3)
    k = 7.8590 * c + 2.9554 * c * c
    if abs(k) < SMALL_K:
        sigma = lm.l2 / math.log(2)
        return GevParams(lm.l1 - EULER_GAMMA * sigma, sigma, 0.0)
    g = math.gamma(1.0 + k)
    sigma = lm.l2 * k / ((1.0 - 2.0 ** (-k)) * g)
    mu = lm.l1 - sigma * (1.0 - g) / k
    return GevParams(mu, sigma, k)


def gev_lmoments(p: GevParams) -> LMoments:
    """Population L-moments (needs ``k > -1``)."""
    k = p.k
    if k <= -1:
        raise ValueError("GEV L-moments exist only for k > -1")
    if abs(k) < SMALL_K:
        l2 = p.sigma * math.log(2)
        t3 = math.log(9 / 8) / math.log(2)
        t4 = (16 * math.log(2) - 10 * math.log(3)) / math.log(2)
        return LMoments(p.mu + EULER_GAMMA * p.sigma, l2, t3, t4)
    g = math.gamma(1.0 + k)
    a2 = 1.0 - 2.0 ** (-k)
    a3 = 1.0 - 3.0 ** (-k)
    a4 = 1.0 - 4.0 ** (-k)
    return LMoments(
        l1=p.mu + p.sigma * (1.0 - g) / k,
        l2=p.sigma * a2 * g / k,
        t3=2.0 * a3 / a2 - 3.0,
        t4=(5.0 * a4 - 10.0 * a3 + 6.0 * a2) / a2,
    )


def gev_quantile(p: GevParams, u):
    u = np.asarray(u, dtype=np.float64)
    y = -np.log(u)
    if abs(p.k) < SMALL_K:
        return p.mu - p.sigma * np.log(y)
    # (1 - y**k) / k written with expm1 to stay accurate for small k
    return p.mu - p.sigma * np.expm1(p.k * np.log(y)) / p.k


def gev_cdf(p: GevParams, x):
    x = np.asarray(x, dtype=np.float64)
    z = (x - p.mu) / p.sigma
    if abs(p.k) < SMALL_K:
        return np.exp(-np.exp(-z))
    arg = 1.0 - p.k * z
    with np.errstate(divide="ignore", invalid="ignore"):
        y = -np.log(arg) / p.k
        f = np.exp(-np.exp(-y))
    # outside the support: below the lower bound (k < 0) or above the upper (k > 0)
    outside = arg <= 0
    return np.where(outside, 1.0 if p.k > 0 else 0.0, f)


def sample_gev(p: GevParams, n: int, seed: int) -> np.ndarray:
    """``n`` inverse-CDF draws using the ``sampler`` stream of ``seed``."""
    if n < 0:
        raise ValueError("n must be >= 0")
    if n == 0:
        return np.empty(0)
    return gev_quantile(p, open_uniform(stream(seed, "sampler"), n))
