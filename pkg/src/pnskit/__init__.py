"""Partial nomination sampling (PNS) toolkit.

Order-statistic beta-mixture math, moment-based and maximum-likelihood CDF
estimators with asymptotic variances, PNS samplers with perfect/imperfect
ranking and natural ties, a Monte Carlo efficiency engine, and a survey
dataset pipeline.
"""

__version__ = "0.1.0"

from .design import DesignSpec, Direction
from .estimators import (
    EstimateReport,
    PnsSample,
    TieMatrix,
    are,
    edf,
    estimate_mb,
    estimate_ml,
    stratum_counts,
    var_mb,
    var_ml,
    var_srs,
)
from .kernels import BACKEND
from .sampler import (
    ExponentialParent,
    FinitePopulation,
    LinearErrorRanking,
    NormalParent,
    PerfectRanking,
    UniformParent,
    dell_clutter_score,
    draw_maxpns_fixed,
    draw_minpns_concomitant,
    draw_minpns_fixed,
    scenario_counts,
    scenario_weights,
)

__all__ = [
    "BACKEND",
    "DesignSpec",
    "Direction",
    "EstimateReport",
    "ExponentialParent",
    "FinitePopulation",
    "LinearErrorRanking",
    "NormalParent",
    "PerfectRanking",
    "PnsSample",
    "TieMatrix",
    "UniformParent",
    "are",
    "dell_clutter_score",
    "draw_maxpns_fixed",
    "draw_minpns_concomitant",
    "draw_minpns_fixed",
    "edf",
    "estimate_mb",
    "estimate_ml",
    "scenario_counts",
    "scenario_weights",
    "stratum_counts",
    "var_mb",
    "var_ml",
    "var_srs",
]
