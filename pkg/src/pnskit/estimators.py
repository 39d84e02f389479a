"""CDF estimators for partially nominated samples.

Holds the sample data model (tie matrix, strata), the empirical, moment-based
and maximum-likelihood estimators, their asymptotic variances, and the
asymptotic relative efficiency against simple random sampling.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import kernels
from .design import DesignSpec, Direction, clamp_unit, g_inverse


@dataclass(frozen=True)
class TieMatrix:
    """The n x m binary tie-information matrix.

    Row i flags the units indistinguishable from the selected extreme in
    set i; the selected unit is always tied to itself, so column 1 is all
    ones and row sums lie in [1, m].
    """

    rows: np.ndarray

    def __post_init__(self):
        rows = np.asarray(self.rows, dtype=np.int64)
        if rows.ndim != 2:
            raise ValueError("tie matrix must be two-dimensional")
        if not np.isin(rows, (0, 1)).all():
            raise ValueError("tie matrix entries must be 0 or 1")
        if not (rows[:, 0] == 1).all():
            raise ValueError("first tie column must be all ones (unit tied to itself)")
        object.__setattr__(self, "rows", rows)

    @property
    def n(self) -> int:
        return self.rows.shape[0]

    @property
    def m(self) -> int:
        return self.rows.shape[1]

    def row_sums(self) -> np.ndarray:
        return self.rows.sum(axis=1)

    @classmethod
    def from_strata(cls, strata, m: int) -> "TieMatrix":
        """Canonical tie rows with r leading ones for each stratum label r."""
        strata = np.asarray(strata, dtype=np.int64)
        rows = (np.arange(1, m + 1)[None, :] <= strata[:, None]).astype(np.int64)
        return cls(rows)


def stratum_counts(ties: TieMatrix) -> np.ndarray:
    """n_r = number of rows with row sum r, for r = 1..m."""
    return np.bincount(ties.row_sums(), minlength=ties.m + 1)[1:]


@dataclass(frozen=True)
class PnsSample:
    """Measured values with their stratum labels and the implied design."""

    values: np.ndarray
    strata: np.ndarray
    spec: DesignSpec

    def __post_init__(self):
        values = np.asarray(self.values, dtype=np.float64)
        strata = np.asarray(self.strata, dtype=np.int64)
        if values.ndim != 1 or values.shape != strata.shape:
            raise ValueError("values and strata must be 1-d arrays of equal length")
        if values.size == 0:
            raise ValueError("empty sample")
        if strata.min() < 1 or strata.max() > self.spec.m:
            raise ValueError(f"stratum labels must lie in [1, {self.spec.m}]")
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "strata", strata)

    @classmethod
    def from_tie_matrix(
        cls, values, ties: TieMatrix, direction: Direction = Direction.MIN
    ) -> "PnsSample":
        strata = ties.row_sums()
        spec = DesignSpec.from_counts(
            np.bincount(strata, minlength=ties.m + 1)[1:], direction
        )
        return cls(np.asarray(values, dtype=np.float64), strata, spec)

    @property
    def n(self) -> int:
        return self.values.shape[0]

    def counts(self) -> np.ndarray:
        return np.bincount(self.strata, minlength=self.spec.m + 1)[1:]

    def tie_matrix(self) -> TieMatrix:
        return TieMatrix.from_strata(self.strata, self.spec.m)

    def successes(self, t: float) -> np.ndarray:
        """Per-stratum counts of measured values <= t."""
        hit = self.values <= t
        return np.bincount(self.strata[hit], minlength=self.spec.m + 1)[1:]


@dataclass(frozen=True)
class EstimateReport:
    t: float
    estimate: float
    asymptotic_variance: float
    n: int
    method: str


def edf(sample: PnsSample, t: float) -> float:
    """Naive empirical CDF of the pooled measured values."""
    return float(np.count_nonzero(sample.values <= t)) / sample.n


def estimate_mb(sample: PnsSample, t: float) -> EstimateReport:
    """Moment-based estimator: invert g at the pooled EDF value."""
    u = edf(sample, t)
    est = g_inverse(u, sample.spec)
    return EstimateReport(
        t=float(t),
        estimate=est,
        asymptotic_variance=var_mb(est, sample.spec),
        n=sample.n,
        method="mb",
    )


def estimate_ml(sample: PnsSample, t: float) -> EstimateReport:
    """Maximum-likelihood estimator from the per-stratum binomial counts."""
    nr = np.ascontiguousarray(sample.counts(), dtype=np.int64)
    yr = np.ascontiguousarray(sample.successes(t), dtype=np.int64)
    if sample.spec.direction is Direction.MAX:
        # L_max(p; y, n) = L_min(1 - p; n - y, n) by the reflection identity.
        est = 1.0 - kernels.ml_root(np.ascontiguousarray(nr - yr), nr)
    else:
        est = kernels.ml_root(yr, nr)
    est = clamp_unit(est)
    return EstimateReport(
        t=float(t),
        estimate=est,
        asymptotic_variance=var_ml(est, sample.spec),
        n=sample.n,
        method="ml",
    )


def var_srs(F_t: float) -> float:
    """Asymptotic variance of the SRS empirical CDF: F(1-F)."""
    if not 0.0 <= F_t <= 1.0:
        raise ValueError(f"F_t={F_t!r} outside [0, 1]")
    return F_t * (1.0 - F_t)


def _min_direction_point(F_t: float, spec: DesignSpec) -> tuple[float, np.ndarray]:
    """Reduce to the min direction; variances reflect as sigma_max(F) = sigma_min(1-F)."""
    if spec.direction is Direction.MAX:
        return 1.0 - F_t, spec._q_arr
    return F_t, spec._q_arr


def var_mb(F_t: float, spec: DesignSpec) -> float:
    """Asymptotic variance of the moment-based estimator at true CDF value F_t."""
    if not 0.0 <= F_t <= 1.0:
        raise ValueError(f"F_t={F_t!r} outside [0, 1]")
    if F_t in (0.0, 1.0):
        return 0.0
    x, q = _min_direction_point(F_t, spec)
    m = spec.m
    num = 0.0
    for r in range(1, m + 1):
        if q[r - 1] == 0.0:
            continue
        Fr = kernels.stratum_cdf(x, r, m)
        num += q[r - 1] * Fr * (1.0 - Fr)
    gp = kernels.g_mix_deriv(x, q)
    return num / (gp * gp)


def var_ml(F_t: float, spec: DesignSpec) -> float:
    """Asymptotic variance of the maximum-likelihood estimator at F_t."""
    if not 0.0 <= F_t <= 1.0:
        raise ValueError(f"F_t={F_t!r} outside [0, 1]")
    if F_t in (0.0, 1.0):
        return 0.0
    x, q = _min_direction_point(F_t, spec)
    m = spec.m
    info = 0.0
    for r in range(1, m + 1):
        if q[r - 1] == 0.0:
            continue
        Fr = kernels.stratum_cdf(x, r, m)
        fr = kernels.stratum_pdf(x, r, m)
        info += q[r - 1] * fr * fr / (Fr * (1.0 - Fr))
    return 1.0 / info


def are(F_t: float, spec: DesignSpec, method: str) -> float:
    """Asymptotic relative efficiency var_srs / var_method (> 1 favors PNS)."""
    if method == "mb":
        v = var_mb(F_t, spec)
    elif method == "ml":
        v = var_ml(F_t, spec)
    else:
        raise ValueError(f"unknown method {method!r}")
    s = var_srs(F_t)
    if v == 0.0:
        if s == 0.0:
            return 1.0
        raise ValueError("zero asymptotic variance at interior point")
    return s / v
