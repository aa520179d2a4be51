"""Four-parameter Kappa distribution (Hosking, 1994).

Quantile function::

    x(F) = xi + alpha / k * (1 - ((1 - F**h) / h)**k)

with the continuous limits ``k -> 0`` (``xi - alpha * log((1 - F**h) / h)``)
and ``h -> 0`` (the GEV quantile).  ``h = 1`` gives the generalized Pareto,
``h = -1`` the generalized logistic, and ``k = h = 1`` the uniform on
``[xi, xi + alpha]``.

Fitting matches the population L-skewness and L-kurtosis to the sample
values by damped Newton-Raphson in ``(k, h)``, then solves ``alpha`` and
``xi`` from ``l1`` and ``l2``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import digamma, gammaln, polygamma

from .gev import EULER_GAMMA, FitError, GevParams, fit_gev
from .lmoments import DegenerateSample, LMoments
from .rng import open_uniform, stream

SMALL_K = 1e-8
SMALL_H_QUANTILE = 1e-8
SMALL_H_MOMENTS = 1e-5
SERIES_K = 1e-3

TOL = 1e-8
MAX_ITER = 50
MAX_HALVINGS = 30


class InfeasibleLMoments(FitError):
    """(t3, t4) outside the region the Kappa family can reach."""


@dataclass(frozen=True)
class Kappa4Params:
    xi: float
    alpha: float
    k: float
    h: float

    def __post_init__(self):
        if not self.alpha > 0:
            raise ValueError(f"Kappa scale must be positive, got {self.alpha}")

    def to_dict(self) -> dict:
        return {"xi": self.xi, "alpha": self.alpha, "k": self.k, "h": self.h}


@dataclass(frozen=True)
class KappaFit:
    """Fit result; ``fallback`` is set when Newton failed and a GEV (h=0) was used."""

    params: Kappa4Params
    fallback: bool = False
    iterations: int = 0
    residual: float = 0.0


def feasible(k: float, h: float) -> bool:
    """L-moments up to order 4 exist."""
    if not (math.isfinite(k) and math.isfinite(h)):
        return False
    if k <= -1:
        return False
    if h < 0 and h * k <= -1:
        return False
    return True


def attainable(t3: float, t4: float) -> bool:
    """Strictly between the lower bound for any distribution and the h = -1 curve."""
    return abs(t3) < 1 and (5 * t3 * t3 - 1) / 4 < t4 < (5 * t3 * t3 + 1) / 6


def _lgamma_shift(z, k: float, terms: int = 6):
    """log Gamma(z + k) - log Gamma(z) by its Taylor series in ``k``."""
    z = np.asarray(z, dtype=np.float64)
    out = np.zeros_like(z)
    fact = 1.0
    for j in range(1, terms + 1):
        fact *= j
        out = out + polygamma(j - 1, z) * k ** j / fact
    return out


def _log_terms_small_k(k: float, h: float, r: np.ndarray) -> np.ndarray:
    """log g_r for small ``k``, free of the O(k) cancellation of the direct formula."""
    base = _lgamma_shift(1.0, k)
    if abs(h) < SMALL_H_MOMENTS:
        return base - k * np.log(r) - 0.5 * h * k * (1.0 + k) / r
    if h > 0:
        return base - k * math.log(h) - _lgamma_shift(1.0 + r / h, k)
    return base - k * math.log(-h) + _lgamma_shift(-r / h, -k)


def _pwm_terms(k: float, h: float) -> tuple[np.ndarray, bool]:
    """Terms ``g_r``, r = 1..4, that the L-moments are linear in.

    For ``k`` away from 0: l1 = xi + alpha (1 - g_1) / k and
    l2 = alpha (g_1 - g_2) / k.  Near ``k == 0`` the returned values are
    ``(1 - g_r) / k`` (or its limit) instead, flagged by the second element,
    and l1 = xi + alpha g_1, l2 = alpha (g_2 - g_1).
    """
    r = np.arange(1, 5, dtype=np.float64)
    if k == 0.0:
        if abs(h) < SMALL_H_MOMENTS:
            return EULER_GAMMA + np.log(r) + 0.5 * h / r, True
        if h > 0:
            return EULER_GAMMA + math.log(h) + digamma(1.0 + r / h), True
        return EULER_GAMMA + math.log(-h) + digamma(-r / h), True
    if abs(k) < SERIES_K:
        return -np.expm1(_log_terms_small_k(k, h, r)) / k, True
    lg = math.lgamma(1.0 + k)
    if abs(h) < SMALL_H_MOMENTS:
        # first-order expansion in h around the GEV
        return np.exp(lg - k * np.log(r)) * (1.0 - 0.5 * h * k * (1.0 + k) / r), False
    if h > 0:
        arg = lg + gammaln(1.0 + r / h) - gammaln(1.0 + k + r / h) - k * math.log(h)
    else:
        arg = (lg + np.log(r) + gammaln(-r / h - k) - gammaln(1.0 - r / h)
               - (1.0 + k) * math.log(-h))
    return np.exp(arg), False


def _differences(k: float, h: float):
    g, limit = _pwm_terms(k, h)
    # d_r = g_r - g_1 carries the sign convention of the k != 0 branch
    d = (g[0] - g) if limit else (g - g[0])
    return g, d, limit


def kappa_ratios(k: float, h: float) -> tuple[float, float]:
    """Population (t3, t4)."""
    _, d, _ = _differences(k, h)
    t3 = 2.0 * d[2] / d[1] - 3.0
    t4 = 6.0 - 10.0 * d[2] / d[1] + 5.0 * d[3] / d[1]
    return float(t3), float(t4)


def kappa_lmoments(p: Kappa4Params) -> LMoments:
    if not feasible(p.k, p.h):
        raise ValueError(f"L-moments do not exist for k={p.k}, h={p.h}")
    g, d, limit = _differences(p.k, p.h)
    if limit:
        l1 = p.xi + p.alpha * g[0]
        l2 = -p.alpha * d[1]
    else:
        l1 = p.xi + p.alpha * (1.0 - g[0]) / p.k
        l2 = -p.alpha * d[1] / p.k
    t3, t4 = kappa_ratios(p.k, p.h)
    return LMoments(float(l1), float(l2), t3, t4)


def _location_scale(lm: LMoments, k: float, h: float) -> tuple[float, float]:
    g, d, limit = _differences(k, h)
    if limit:
        alpha = lm.l2 / -d[1]
        xi = lm.l1 - alpha * g[0]
    else:
        alpha = lm.l2 * k / -d[1]
        xi = lm.l1 - alpha * (1.0 - g[0]) / k
    return float(xi), float(alpha)


def _residual(k, h, t3, t4) -> np.ndarray | None:
    if not feasible(k, h):
        return None
    try:
        with np.errstate(all="ignore"):
            a, b = kappa_ratios(k, h)
    except (ValueError, OverflowError, ZeroDivisionError):
        return None
    res = np.array([a - t3, b - t4])
    return res if np.all(np.isfinite(res)) else None


def _jacobian(k, h, t3, t4, base) -> np.ndarray | None:
    eps = 1e-6
    cols = []
    for dk, dh in ((eps, 0.0), (0.0, eps)):
        fwd = _residual(k + dk, h + dh, t3, t4)
        bwd = _residual(k - dk, h - dh, t3, t4)
        if fwd is not None and bwd is not None:
            cols.append((fwd - bwd) / (2 * eps))
        elif fwd is not None:
            cols.append((fwd - base) / eps)
        elif bwd is not None:
            cols.append((base - bwd) / eps)
        else:
            return None
    return np.column_stack(cols)


def _newton(t3: float, t4: float, k0: float, h0: float):
    k, h = k0, h0
    res = _residual(k, h, t3, t4)
    if res is None:
        return None
    norm = np.max(np.abs(res))
    for it in range(1, MAX_ITER + 1):
        if norm < TOL:
            return k, h, it - 1, norm
        jac = _jacobian(k, h, t3, t4, res)
        if jac is None:
            return None
        try:
            step = np.linalg.solve(jac, -res)
        except np.linalg.LinAlgError:
            return None
        if not np.all(np.isfinite(step)):
            return None
        lam = 1.0
        for _ in range(MAX_HALVINGS):
            kn, hn = k + lam * step[0], h + lam * step[1]
            rn = _residual(kn, hn, t3, t4)
            if rn is not None and np.max(np.abs(rn)) < norm:
                break
            lam *= 0.5
        else:
            return None
        k, h, res = kn, hn, rn
        norm = np.max(np.abs(res))
    if norm < TOL:
        return k, h, MAX_ITER, norm
    return None


def fit_kappa4_detailed(lm: LMoments) -> KappaFit:
    try:
        lm.require_ratios()
    except DegenerateSample as exc:
        raise InfeasibleLMoments(str(exc)) from None
    if not attainable(lm.t3, lm.t4):
        raise InfeasibleLMoments(
            f"(t3={lm.t3:.6g}, t4={lm.t4:.6g}) is outside the Kappa-attainable region"
        )
    gev = fit_gev(lm)
    sol = _newton(lm.t3, lm.t4, gev.k, 0.0)
    if sol is None:
        return KappaFit(Kappa4Params(gev.mu, gev.sigma, gev.k, 0.0), fallback=True)
    k, h, iters, norm = sol
    if abs(k) < SMALL_K:
        k = 0.0
    xi, alpha = _location_scale(lm, k, h)
    if not alpha > 0:
        return KappaFit(Kappa4Params(gev.mu, gev.sigma, gev.k, 0.0), fallback=True)
    return KappaFit(Kappa4Params(xi, alpha, float(k), float(h)), False, iters, float(norm))


def fit_kappa4(lm: LMoments) -> Kappa4Params:
    """L-moment estimator of the four Kappa parameters.

    Raises :class:`InfeasibleLMoments` for a degenerate sample or ratios
    outside the attainable region.  If Newton-Raphson does not converge the
    GEV fit (h = 0) is returned; use :func:`fit_kappa4_detailed` to see
    whether that happened.
    """
    return fit_kappa4_detailed(lm).params


def kappa_quantile(p: Kappa4Params, u):
    u = np.asarray(u, dtype=np.float64)
    if abs(p.h) < SMALL_H_QUANTILE:
        y = -np.log(u)
    else:
        # (1 - u**h) / h
        y = -np.expm1(p.h * np.log(u)) / p.h
    if abs(p.k) < SMALL_K:
        return p.xi - p.alpha * np.log(y)
    return p.xi - p.alpha * np.expm1(p.k * np.log(y)) / p.k


def kappa_cdf(p: Kappa4Params, x):
    x = np.asarray(x, dtype=np.float64)
    z = (x - p.xi) / p.alpha
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        if abs(p.k) < SMALL_K:
            y = z
        else:
            y = -np.log1p(-p.k * z) / p.k
        e = np.exp(-y)
        if abs(p.h) < SMALL_H_QUANTILE:
            f = np.exp(-e)
        else:
            f = np.exp(np.log1p(-p.h * e) / p.h)
    lo, hi = kappa_support(p)
    f = np.where(np.isnan(f), np.where(x <= lo, 0.0, 1.0), f)
    f = np.where(x <= lo, 0.0, f)
    f = np.where(x >= hi, 1.0, f)
    return np.clip(f, 0.0, 1.0)


def kappa_support(p: Kappa4Params) -> tuple[float, float]:
    """Lower and upper end of the support (x at F = 0 and F = 1)."""
    if p.h > 0:
        if abs(p.k) < SMALL_K:
            lo = p.xi + p.alpha * math.log(p.h)
        else:
            lo = p.xi + p.alpha * (1.0 - p.h ** (-p.k)) / p.k
    elif p.k < 0 and abs(p.k) >= SMALL_K:
        lo = p.xi + p.alpha / p.k
    else:
        lo = -math.inf
    hi = p.xi + p.alpha / p.k if p.k >= SMALL_K else math.inf
    return lo, hi


def sample_kappa4(p: Kappa4Params, n: int, seed: int) -> np.ndarray:
    """``n`` inverse-CDF draws using the ``sampler`` stream of ``seed``."""
    if n < 0:
        raise ValueError("n must be >= 0")
    if n == 0:
        return np.empty(0)
    return kappa_quantile(p, open_uniform(stream(seed, "sampler"), n))


def gev_as_kappa(p: GevParams) -> Kappa4Params:
    return Kappa4Params(p.mu, p.sigma, p.k, 0.0)
