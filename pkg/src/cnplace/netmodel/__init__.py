"""Bandwidth/RTT models: sample L-moments, GEV and Kappa fits, samplers, synthesis."""

from .fitting import FittedDistribution, compare_fits, fit_samples, params_from_dict
from .gev import FitError, GevParams, fit_gev, gev_cdf, gev_lmoments, gev_quantile, sample_gev
from .kappa import (
    InfeasibleLMoments,
    Kappa4Params,
    fit_kappa4,
    fit_kappa4_detailed,
    kappa_cdf,
    kappa_lmoments,
    kappa_quantile,
    sample_kappa4,
)
from .lmoments import DegenerateSample, LMoments, SampleSizeError, sample_lmoments
from .synth import synthesize_attributes

__all__ = [
    "DegenerateSample",
    "FitError",
    "FittedDistribution",
    "GevParams",
    "InfeasibleLMoments",
    "Kappa4Params",
    "LMoments",
    "SampleSizeError",
    "compare_fits",
    "fit_gev",
    "fit_kappa4",
    "fit_kappa4_detailed",
    "fit_samples",
    "gev_cdf",
    "gev_lmoments",
    "gev_quantile",
    "kappa_cdf",
    "kappa_lmoments",
    "kappa_quantile",
    "params_from_dict",
    "sample_gev",
    "sample_kappa4",
    "sample_lmoments",
    "synthesize_attributes",
]
