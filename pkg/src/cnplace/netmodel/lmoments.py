"""Unbiased sample L-moments from probability-weighted moments."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


class LMomentError(ValueError):
    pass


class SampleSizeError(LMomentError):
    pass


class DegenerateSample(LMomentError):
    """The sample has no dispersion (l2 == 0), so t3 and t4 are undefined."""


@dataclass(frozen=True)
class LMoments:
    l1: float
    l2: float
    t3: float
    t4: float
    n: int = 0

    @property
    def defined(self) -> bool:
        return self.l2 > 0 and np.isfinite(self.t3) and np.isfinite(self.t4)

    def require_ratios(self) -> None:
        if not self.defined:
            raise DegenerateSample("l2 is zero; L-moment ratios are undefined")

    def to_dict(self) -> dict:
        return {"l1": self.l1, "l2": self.l2, "t3": _json_float(self.t3),
                "t4": _json_float(self.t4), "n": self.n}


def _json_float(x: float):
    return float(x) if np.isfinite(x) else None


def sample_lmoments(xs) -> LMoments:
    """First four sample L-moments.

    For a constant sample ``l2`` is 0 and ``t3``/``t4`` are NaN; check
    :attr:`LMoments.defined` before using the ratios.
    """
    x = np.sort(np.asarray(xs, dtype=np.float64).ravel())
    n = x.size
    if n < 4:
        raise SampleSizeError(f"need at least 4 samples, got {n}")
    if not np.all(np.isfinite(x)):
        raise LMomentError("samples must be finite")
    j = np.arange(n, dtype=np.float64)  # j - 1 for the 1-based order statistic
    # b_r = n^-1 sum x_(j) C(j-1, r) / C(n-1, r), with the ratio of binomials
    # expanded as a product to stay in floating point
    w1 = j / (n - 1)
    w2 = w1 * (j - 1) / (n - 2)
    w3 = w2 * (j - 2) / (n - 3)
    l1 = x.mean()
    # l2..l4 are shift invariant; centring first avoids cancellation
    xc = x - l1
    b0 = xc.mean()
    b1 = np.dot(w1, xc) / n
    b2 = np.dot(w2, xc) / n
    b3 = np.dot(w3, xc) / n
    l2 = 2 * b1 - b0
    l3 = 6 * b2 - 6 * b1 + b0
    l4 = 20 * b3 - 30 * b2 + 12 * b1 - b0
    spread = x[-1] - x[0]
    if spread == 0 or l2 <= 0:
        return LMoments(float(l1), 0.0, float("nan"), float("nan"), n)
    return LMoments(float(l1), float(l2), float(l3 / l2), float(l4 / l2), n)
