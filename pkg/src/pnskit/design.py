"""Order-statistic beta-mixture math for partial nomination designs.

Everything here is exact integer-parameter beta arithmetic: stratum CDFs and
densities, the weighted mixing bijection g, its derivative, and its numerical
inverse.  The max direction is handled everywhere through the reflection
identity F_max(x; r) = 1 - F_min(1 - x; r), so only the min-direction kernels
exist.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

import numpy as np

from . import kernels

_WEIGHT_TOL = 1e-12
_CLAMP_TOL = 1e-9
_MAX_SET_SIZE = 64


class Direction(enum.Enum):
    MIN = "min"
    MAX = "max"


@dataclass(frozen=True)
class DesignSpec:
    """Set size, stratum weights, and nomination direction of a PNS design."""

    m: int
    q: tuple[float, ...]
    direction: Direction = Direction.MIN

    _q_arr: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if self.m < 1:
            raise ValueError(f"set size must be >= 1, got {self.m}")
        if self.m > _MAX_SET_SIZE:
            raise ValueError(f"set size {self.m} exceeds supported cap {_MAX_SET_SIZE}")
        q = np.asarray(self.q, dtype=np.float64)
        if q.shape != (self.m,):
            raise ValueError(f"weight vector has length {q.shape[0]}, expected m={self.m}")
        if np.any(q < 0.0):
            raise ValueError("stratum weights must be nonnegative")
        if abs(q.sum() - 1.0) > _WEIGHT_TOL:
            raise ValueError(f"stratum weights must sum to 1, got {q.sum()!r}")
        object.__setattr__(self, "q", tuple(float(v) for v in q))
        object.__setattr__(self, "_q_arr", q)

    @classmethod
    def from_counts(cls, counts, direction: Direction = Direction.MIN) -> "DesignSpec":
        """Design with weights n_r / n taken from observed stratum counts."""
        counts = np.asarray(counts, dtype=np.float64)
        n = counts.sum()
        if n <= 0:
            raise ValueError("stratum counts sum to zero")
        return cls(m=counts.shape[0], q=tuple(counts / n), direction=direction)

    @property
    def weights(self) -> np.ndarray:
        return self._q_arr


def _check_unit(x: float, name: str) -> float:
    x = float(x)
    if not 0.0 <= x <= 1.0:
        raise ValueError(f"{name}={x!r} outside [0, 1]")
    return x


def _check_rank(i: int, m: int, name: str = "rank") -> None:
    if not 1 <= i <= m:
        raise ValueError(f"{name}={i} outside [1, {m}]")


def clamp_unit(x: float) -> float:
    """Snap tiny arithmetic overshoots back into [0, 1]; larger ones are bugs."""
    if x < 0.0:
        if x < -_CLAMP_TOL:
            raise ValueError(f"probability {x!r} below 0 by more than {_CLAMP_TOL}")
        return 0.0
    if x > 1.0:
        if x > 1.0 + _CLAMP_TOL:
            raise ValueError(f"probability {x!r} above 1 by more than {_CLAMP_TOL}")
        return 1.0
    return x


def beta_cdf(x: float, i: int, m: int) -> float:
    """P(Beta(i, m+1-i) <= x), exact via the binomial-sum identity."""
    x = _check_unit(x, "x")
    _check_rank(i, m)
    return clamp_unit(kernels.beta_cdf(x, i, m))


def beta_pdf(x: float, i: int, m: int) -> float:
    """Density of Beta(i, m+1-i) at x."""
    x = _check_unit(x, "x")
    _check_rank(i, m)
    return kernels.beta_pdf(x, i, m)


def stratum_cdf(x: float, r: int, spec: DesignSpec) -> float:
    """CDF of a measured unit in stratum r under the given design."""
    x = _check_unit(x, "x")
    _check_rank(r, spec.m, "stratum")
    if spec.direction is Direction.MAX:
        return clamp_unit(1.0 - kernels.stratum_cdf(1.0 - x, r, spec.m))
    return clamp_unit(kernels.stratum_cdf(x, r, spec.m))


def stratum_pdf(x: float, r: int, spec: DesignSpec) -> float:
    x = _check_unit(x, "x")
    _check_rank(r, spec.m, "stratum")
    if spec.direction is Direction.MAX:
        return kernels.stratum_pdf(1.0 - x, r, spec.m)
    return kernels.stratum_pdf(x, r, spec.m)


def g_mix(x: float, spec: DesignSpec) -> float:
    """Weighted stratum mixture g(x) = sum_r q_r F_(r)(x); strictly increasing."""
    x = _check_unit(x, "x")
    if spec.direction is Direction.MAX:
        return clamp_unit(1.0 - kernels.g_mix(1.0 - x, spec._q_arr))
    return clamp_unit(kernels.g_mix(x, spec._q_arr))


def g_mix_deriv(x: float, spec: DesignSpec) -> float:
    x = _check_unit(x, "x")
    if spec.direction is Direction.MAX:
        return kernels.g_mix_deriv(1.0 - x, spec._q_arr)
    return kernels.g_mix_deriv(x, spec._q_arr)


def g_inverse(u: float, spec: DesignSpec) -> float:
    """x with g_mix(x) = u, by safeguarded bisection; exact at the endpoints."""
    u = _check_unit(u, "u")
    if spec.direction is Direction.MAX:
        return clamp_unit(1.0 - kernels.g_inverse(1.0 - u, spec._q_arr))
    return clamp_unit(kernels.g_inverse(u, spec._q_arr))


def g_inverse_batch(u: np.ndarray, spec: DesignSpec) -> np.ndarray:
    """Vectorized ``g_inverse`` over an array of probabilities."""
    u = np.ascontiguousarray(u, dtype=np.float64)
    if u.size and (u.min() < 0.0 or u.max() > 1.0):
        raise ValueError("u values outside [0, 1]")
    if spec.direction is Direction.MAX:
        return 1.0 - kernels.g_inverse_batch(np.ascontiguousarray(1.0 - u), spec._q_arr)
    return kernels.g_inverse_batch(u, spec._q_arr)
