"""Normal baseline used only for goodness-of-fit comparisons."""

from __future__ import annotations

import math
from dataclasses import dataclass

from scipy.special import ndtr

from .gev import FitError
from .lmoments import LMoments


@dataclass(frozen=True)
class NormalParams:
    mu: float
    sigma: float

    def to_dict(self) -> dict:
        return {"mu": self.mu, "sigma": self.sigma}


def fit_normal(lm: LMoments) -> NormalParams:
    # l2 = sigma / sqrt(pi) for the normal
    if not lm.l2 > 0:
        raise FitError("l2 is zero; cannot fit a normal")
    return NormalParams(lm.l1, lm.l2 * math.sqrt(math.pi))


def normal_cdf(p: NormalParams, x):
    return ndtr((x - p.mu) / p.sigma)
