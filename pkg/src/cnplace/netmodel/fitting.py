"""Fit a family to raw samples and score the fit."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..stats import gof_ks
from .gev import FitError, GevParams, fit_gev, gev_cdf
from .kappa import Kappa4Params, fit_kappa4_detailed, kappa_cdf
from .lmoments import LMoments, sample_lmoments
from .normal import NormalParams, fit_normal, normal_cdf

FAMILIES = ("gev", "kappa4", "normal")


@dataclass(frozen=True)
class FittedDistribution:
    family: str
    params: GevParams | Kappa4Params | NormalParams
    lmoments: LMoments
    ks: float
    fallback: bool = False
    notes: tuple[str, ...] = field(default=())

    def cdf(self, x):
        return family_cdf(self.family, self.params, x)

    def to_dict(self) -> dict:
        d = {
            "family": self.family,
            "params": self.params.to_dict(),
            "lmoments": self.lmoments.to_dict(),
            "ks": self.ks,
        }
        if self.family == "kappa4":
            d["fallback"] = self.fallback
        return d


def family_cdf(family: str, params, x):
    if family == "gev":
        return gev_cdf(params, x)
    if family == "kappa4":
        return kappa_cdf(params, x)
    if family == "normal":
        return normal_cdf(params, x)
    raise ValueError(f"unknown family {family!r}")


def params_from_dict(family: str, d: dict):
    """Rebuild parameters from a ``fit`` JSON document's ``params`` object."""
    try:
        if family == "gev":
            return GevParams(float(d["mu"]), float(d["sigma"]), float(d["k"]))
        if family == "kappa4":
            return Kappa4Params(float(d["xi"]), float(d["alpha"]), float(d["k"]), float(d["h"]))
        if family == "normal":
            return NormalParams(float(d["mu"]), float(d["sigma"]))
    except (KeyError, TypeError) as exc:
        raise FitError(f"bad {family} parameters: {exc}") from None
    raise FitError(f"unknown family {family!r}")


def fit_samples(xs, family: str) -> FittedDistribution:
    """L-moment fit of ``family`` plus the KS distance of the data to it.

    Raises SampleSizeError (< 4 samples) or FitError (degenerate or
    infeasible L-moments).
    """
    x = np.asarray(xs, dtype=np.float64)
    lm = sample_lmoments(x)
    fallback = False
    if family == "gev":
        params = fit_gev(lm)
    elif family == "kappa4":
        res = fit_kappa4_detailed(lm)
        params, fallback = res.params, res.fallback
    elif family == "normal":
        params = fit_normal(lm)
    else:
        raise ValueError(f"unknown family {family!r}; expected one of {FAMILIES}")
    ks = gof_ks(x, lambda v: family_cdf(family, params, v))
    return FittedDistribution(family, params, lm, ks, fallback)


def compare_fits(xs, families=FAMILIES) -> list[FittedDistribution]:
    """Fit every family that admits the sample; best (lowest KS) first."""
    out = []
    for fam in families:
        try:
            out.append(fit_samples(xs, fam))
        except FitError:
            continue
    return sorted(out, key=lambda f: f.ks)
