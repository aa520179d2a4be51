"""Empirical CDF and the Kolmogorov-Smirnov distance."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class Ecdf:
    """Right-continuous step function through ``points`` (value, F(value))."""

    points: tuple[tuple[float, float], ...]

    def __call__(self, x: float) -> float:
        values = [p[0] for p in self.points]
        i = int(np.searchsorted(values, x, side="right"))
        return 0.0 if i == 0 else self.points[i - 1][1]

    def rows(self) -> list[tuple[float, float]]:
        return list(self.points)


def ecdf(xs) -> Ecdf:
    x = np.sort(np.asarray(xs, dtype=np.float64).ravel())
    if x.size == 0:
        raise ValueError("ecdf of an empty sample")
    values, counts = np.unique(x, return_counts=True)
    frac = np.cumsum(counts) / x.size
    frac[-1] = 1.0
    return Ecdf(tuple(zip(values.tolist(), frac.tolist())))


def gof_ks(xs, cdf) -> float:
    """sup |ECDF - CDF| for a continuous ``cdf`` (a vectorized callable)."""
    x = np.sort(np.asarray(xs, dtype=np.float64).ravel())
    n = x.size
    if n == 0:
        raise ValueError("KS statistic of an empty sample")
    f = np.clip(np.asarray(cdf(x), dtype=np.float64), 0.0, 1.0)
    i = np.arange(1, n + 1)
    d_plus = np.max(i / n - f)
    d_minus = np.max(f - (i - 1) / n)
    return float(max(d_plus, d_minus, 0.0))
