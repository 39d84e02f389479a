"""Sample generation for partial nomination designs.

Covers set formation, judgment ranking (perfect, Dell-Clutter linear error,
or ordinal concomitant), tie declaration, random tie breaking, and tie-matrix
recording, for analytic parents and finite populations.  The batch helpers
draw many replications at once and are what the Monte Carlo engine consumes;
the public draw functions are the single-replication front ends.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .design import DesignSpec, Direction
from .estimators import PnsSample, TieMatrix

#: Stratum-weight scenarios from the efficiency study, keyed by name then set size.
SCENARIOS = {
    "A": {3: (4 / 6, 1 / 6, 1 / 6), 5: (0.4, 0.2, 0.2, 0.1, 0.1)},
    "B": {3: (2 / 6, 2 / 6, 2 / 6), 5: (0.2, 0.2, 0.2, 0.2, 0.2)},
    "C": {3: (1 / 6, 1 / 6, 4 / 6), 5: (0.1, 0.1, 0.2, 0.2, 0.4)},
}


def scenario_weights(name: str, m: int) -> tuple[float, ...]:
    """Named lambda vector for set size m; B generalizes to any m."""
    if name in SCENARIOS and m in SCENARIOS[name]:
        return SCENARIOS[name][m]
    if name == "B":
        return tuple(1.0 / m for _ in range(m))
    raise ValueError(f"no scenario {name!r} defined for m={m}")


class UniformParent:
    """Standard uniform parent distribution."""

    name = "uniform"
    mean = 0.5
    std = float(np.sqrt(1.0 / 12.0))

    def draw(self, rng: np.random.Generator, size):
        return rng.random(size)

    def cdf(self, x):
        return np.clip(x, 0.0, 1.0)

    def quantile(self, p):
        return np.asarray(p, dtype=np.float64)


class ExponentialParent:
    """Standard exponential parent distribution."""

    name = "exponential"
    mean = 1.0
    std = 1.0

    def draw(self, rng: np.random.Generator, size):
        return rng.exponential(1.0, size)

    def cdf(self, x):
        return -np.expm1(-np.asarray(x, dtype=np.float64))

    def quantile(self, p):
        return -np.log1p(-np.asarray(p, dtype=np.float64))


class NormalParent:
    """Normal parent with the given mean and standard deviation."""

    name = "normal"

    def __init__(self, mu: float = 0.0, sigma: float = 1.0):
        if sigma <= 0:
            raise ValueError("sigma must be positive")
        self.mean = float(mu)
        self.std = float(sigma)

    def draw(self, rng: np.random.Generator, size):
        return rng.normal(self.mean, self.std, size)

    def cdf(self, x):
        from scipy.stats import norm

        return norm.cdf(x, loc=self.mean, scale=self.std)

    def quantile(self, p):
        from scipy.stats import norm

        return norm.ppf(p, loc=self.mean, scale=self.std)


@dataclass(frozen=True)
class FinitePopulation:
    """Finite survey population sampled with replacement.

    ``values`` holds the non-missing measurements; ``ordinals`` maps a
    variable name to integer level codes aligned with ``values`` (-1 marks a
    missing concomitant).  ``n_total`` / ``n_missing`` preserve the original
    file accounting.
    """

    values: np.ndarray
    ordinals: dict = field(default_factory=dict)
    n_total: int = 0
    n_missing: int = 0

    def __post_init__(self):
        values = np.asarray(self.values, dtype=np.float64)
        if values.ndim != 1 or values.size == 0:
            raise ValueError("population values must be a nonempty 1-d array")
        object.__setattr__(self, "values", values)
        if self.n_total == 0:
            object.__setattr__(self, "n_total", values.size + self.n_missing)

    @property
    def size(self) -> int:
        return self.values.size

    mean = property(lambda self: float(self.values.mean()))
    std = property(lambda self: float(self.values.std()))

    def draw(self, rng: np.random.Generator, size):
        return self.values[rng.integers(0, self.size, size)]

    def cdf(self, x):
        sorted_vals = np.sort(self.values)
        return np.searchsorted(sorted_vals, x, side="right") / self.size

    def ordinal_codes(self, variable: str) -> np.ndarray:
        try:
            return self.ordinals[variable]
        except KeyError:
            raise ValueError(f"population has no ordinal variable {variable!r}") from None


@dataclass(frozen=True)
class PerfectRanking:
    kind = "perfect"


@dataclass(frozen=True)
class LinearErrorRanking:
    """Dell-Clutter linear ranking model with correlation rho."""

    rho: float

    def __post_init__(self):
        if not 0.0 <= self.rho <= 1.0:
            raise ValueError(f"rho={self.rho!r} outside [0, 1]")

    kind = "linear-error"


def scenario_counts(lam, n: int) -> np.ndarray:
    """Integer stratum counts n * lambda, largest-remainder rounded to sum n."""
    lam = np.asarray(lam, dtype=np.float64)
    if n < 1:
        raise ValueError("n must be >= 1")
    if abs(lam.sum() - 1.0) > 1e-9 or np.any(lam < 0):
        raise ValueError("lambda must be a probability vector")
    raw = lam * n
    counts = np.floor(raw).astype(np.int64)
    short = n - counts.sum()
    if short > 0:
        order = np.argsort(-(raw - counts), kind="stable")
        counts[order[:short]] += 1
    return counts


def dell_clutter_score(y, mu_y: float, sigma_y: float, rho: float, z):
    """Perceived ranking score X = rho * (Y - mu)/sigma + sqrt(1 - rho^2) Z."""
    if sigma_y <= 0:
        raise ValueError("sigma_y must be positive")
    if not 0.0 <= rho <= 1.0:
        raise ValueError(f"rho={rho!r} outside [0, 1]")
    return rho * (np.asarray(y) - mu_y) / sigma_y + np.sqrt(1.0 - rho * rho) * np.asarray(z)


def _ranking_scores(values: np.ndarray, ranking, population, rng: np.random.Generator):
    if isinstance(ranking, PerfectRanking):
        return values
    if isinstance(ranking, LinearErrorRanking):
        z = rng.standard_normal(values.shape)
        return dell_clutter_score(values, population.mean, population.std, ranking.rho, z)
    raise ValueError(f"unsupported ranking model {ranking!r} for fixed-lambda draws")


def draw_fixed_batch(
    population,
    ranking,
    lam,
    n: int,
    m: int,
    rng: np.random.Generator,
    reps: int,
    direction: Direction = Direction.MIN,
) -> tuple[np.ndarray, np.ndarray]:
    """Draw ``reps`` fixed-lambda PNS samples at once.

    Returns (values, strata) where values has shape (reps, n) and strata is
    the shared length-n stratum label vector.  For each observation assigned
    stratum r, a set of m parent values is drawn, the r extreme units by
    perceived score form the tie group, and the true value of a uniformly
    chosen member is recorded.
    """
    lam = np.asarray(lam, dtype=np.float64)
    if lam.shape[0] != m:
        raise ValueError(f"lambda has length {lam.shape[0]}, expected m={m}")
    counts = scenario_counts(lam, n)
    strata = np.repeat(np.arange(1, m + 1), counts)
    values = np.empty((reps, n))
    col = 0
    for r in range(1, m + 1):
        k = int(counts[r - 1])
        if k == 0:
            continue
        sets = population.draw(rng, (reps, k, m))
        scores = _ranking_scores(sets, ranking, population, rng)
        if direction is Direction.MAX:
            scores = -scores
        # Positions within a set are i.i.d., so positional tie breaking in
        # argpartition is already uniform over tied units.
        tied = np.argpartition(scores, r - 1, axis=2)[:, :, :r]
        pick = rng.integers(0, r, size=(reps, k, 1))
        chosen = np.take_along_axis(tied, pick, axis=2)
        values[:, col : col + k] = np.take_along_axis(sets, chosen, axis=2)[:, :, 0]
        col += k
    return values, strata


def draw_minpns_fixed(
    population, ranking, lam, n: int, m: int, rng: np.random.Generator
) -> PnsSample:
    """One fixed-lambda MinPNS sample."""
    values, strata = draw_fixed_batch(population, ranking, lam, n, m, rng, 1)
    spec = DesignSpec.from_counts(np.bincount(strata, minlength=m + 1)[1:], Direction.MIN)
    return PnsSample(values[0], strata, spec)


def draw_maxpns_fixed(
    population, ranking, lam, n: int, m: int, rng: np.random.Generator
) -> PnsSample:
    """One fixed-lambda MaxPNS sample (min path on negated scores)."""
    values, strata = draw_fixed_batch(
        population, ranking, lam, n, m, rng, 1, direction=Direction.MAX
    )
    spec = DesignSpec.from_counts(np.bincount(strata, minlength=m + 1)[1:], Direction.MAX)
    return PnsSample(values[0], strata, spec)


def draw_concomitant_batch(
    population: FinitePopulation,
    variable: str,
    n: int,
    m: int,
    rng: np.random.Generator,
    reps: int,
    reverse: bool = False,
) -> tuple[np.ndarray, np.ndarray]:
    """Draw ``reps`` MinPNS samples ranked by an ordinal concomitant.

    Ties form naturally: every unit sharing the extreme ordinal category is
    tied, one of them is measured at random.  ``reverse=True`` ranks in
    reverse (extreme = highest category), for negatively correlated rankers.
    Returns (values, strata), both of shape (reps, n).
    """
    codes = population.ordinal_codes(variable)
    keep = codes >= 0
    if not keep.all():
        pool_vals = population.values[keep]
        pool_codes = codes[keep]
    else:
        pool_vals, pool_codes = population.values, codes
    if pool_vals.size == 0:
        raise ValueError("population empty after removing missing concomitant values")
    idx = rng.integers(0, pool_vals.size, size=(reps, n, m))
    c = pool_codes[idx]
    ext = c.max(axis=2, keepdims=True) if reverse else c.min(axis=2, keepdims=True)
    tied = c == ext
    strata = tied.sum(axis=2)
    u = rng.random((reps, n, m))
    sel = np.where(tied, u, -1.0).argmax(axis=2)
    values = pool_vals[np.take_along_axis(idx, sel[:, :, None], axis=2)[:, :, 0]]
    return values, strata


def draw_minpns_concomitant(
    population: FinitePopulation,
    variable: str,
    n: int,
    m: int,
    rng: np.random.Generator,
    reverse: bool = False,
) -> tuple[PnsSample, TieMatrix]:
    """One concomitant-ranked MinPNS sample plus its tie matrix."""
    values, strata = draw_concomitant_batch(population, variable, n, m, rng, 1, reverse)
    ties = TieMatrix.from_strata(strata[0], m)
    return PnsSample.from_tie_matrix(values[0], ties), ties
