"""Reproducible Monte Carlo experiments: RE curves, ARE curves, dataset studies.

Replications are processed in fixed-size chunks; chunk c uses the RNG stream
seeded by (seed, c), and chunk accumulators are merged in chunk order, so
results are identical for any worker count.  Bias/variance accumulate through
mergeable mean/M2 moments (parallel Welford), keeping 1e5-replication grids
free of catastrophic cancellation.
"""

from __future__ import annotations

import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import kernels
from .design import DesignSpec, g_inverse_batch
from .estimators import are
from .sampler import (
    ExponentialParent,
    FinitePopulation,
    LinearErrorRanking,
    PerfectRanking,
    UniformParent,
    draw_concomitant_batch,
    draw_fixed_batch,
    scenario_weights,
)

DEFAULT_SEED = 20230517
DEFAULT_P_GRID = tuple(round(0.01 * k, 2) for k in range(1, 100))

_PARENTS = {"uniform": UniformParent, "exponential": ExponentialParent}


def default_threads() -> int:
    try:
        return max(1, int(os.environ.get("PNSKIT_THREADS", "1")))
    except ValueError:
        return 1


@dataclass(frozen=True)
class ExperimentConfig:
    """Parameters of one RE(p) simulation run."""

    n: int
    m: int
    scenario: str | tuple = "B"
    rho: float | None = None  # None = perfect ranking
    parent: str = "uniform"
    replications: int = 20_000
    p_grid: tuple = DEFAULT_P_GRID
    seed: int = DEFAULT_SEED
    methods: tuple = ("mb", "ml")
    chunk_size: int = 1000
    common_random_numbers: bool = False

    def weights(self) -> np.ndarray:
        if isinstance(self.scenario, str):
            return np.asarray(scenario_weights(self.scenario, self.m))
        return np.asarray(self.scenario, dtype=np.float64)

    def scenario_label(self) -> str:
        if isinstance(self.scenario, str):
            return self.scenario
        return "(" + ",".join(f"{w:g}" for w in self.scenario) + ")"

    def ranking(self):
        if self.rho is None:
            return PerfectRanking()
        return LinearErrorRanking(self.rho)

    def make_parent(self):
        try:
            return _PARENTS[self.parent]()
        except KeyError:
            raise ValueError(f"unknown parent {self.parent!r}") from None


@dataclass
class Moments:
    """Mergeable count/mean/M2 accumulator (arrays allowed)."""

    count: float
    mean: np.ndarray
    m2: np.ndarray

    @classmethod
    def of(cls, x: np.ndarray, axis: int = 0) -> "Moments":
        count = x.shape[axis]
        mean = x.mean(axis=axis)
        m2 = ((x - np.expand_dims(mean, axis)) ** 2).sum(axis=axis)
        return cls(float(count), mean, m2)

    def merge(self, other: "Moments") -> "Moments":
        total = self.count + other.count
        delta = other.mean - self.mean
        mean = self.mean + delta * (other.count / total)
        m2 = self.m2 + other.m2 + delta**2 * (self.count * other.count / total)
        return Moments(total, mean, m2)

    @property
    def variance(self) -> np.ndarray:
        return self.m2 / self.count


@dataclass(frozen=True)
class ResultRecord:
    """One (method, evaluation point) row of an experiment."""

    method: str
    n: int
    m: int
    scenario: str
    rho: float | None
    point: float
    bias: float
    variance: float
    mse: float
    re: float

    COLUMNS = ("method", "n", "m", "scenario", "rho", "p_or_t", "bias", "variance", "mse", "re")

    def row(self) -> tuple:
        return (
            self.method,
            self.n,
            self.m,
            self.scenario,
            "" if self.rho is None else self.rho,
            self.point,
            self.bias,
            self.variance,
            self.mse,
            self.re,
        )


@dataclass
class ExperimentResult:
    config: ExperimentConfig
    records: list
    srs_variance: np.ndarray
    re_stderr: dict = field(default_factory=dict)

    def re_curve(self, method: str) -> np.ndarray:
        return np.array([r.re for r in self.records if r.method == method])


def _chunk_sizes(replications: int, chunk_size: int) -> list[int]:
    full, rest = divmod(replications, chunk_size)
    return [chunk_size] * full + ([rest] if rest else [])


def _run_chunks(worker, args, nchunks: int, threads: int) -> list:
    if threads <= 1 or nchunks <= 1:
        return [worker(c, *args) for c in range(nchunks)]
    with ProcessPoolExecutor(max_workers=min(threads, nchunks)) as pool:
        futs = [pool.submit(worker, c, *args) for c in range(nchunks)]
        return [f.result() for f in futs]


def _pooled_counts(values: np.ndarray, strata: np.ndarray, m: int, t: np.ndarray):
    """Per-stratum success counts: shape (reps, P, m)."""
    reps = values.shape[0]
    P = t.shape[0]
    y = np.empty((reps, P, m), dtype=np.int64)
    for r in range(1, m + 1):
        vr = values[:, strata == r]
        y[:, :, r - 1] = (vr[:, :, None] <= t[None, None, :]).sum(axis=1)
    return y


def _ml_batch_fixed(y: np.ndarray, nr: np.ndarray) -> np.ndarray:
    """ML estimates for many (rep, point) cells sharing one count vector."""
    flat = y.reshape(-1, y.shape[-1])
    uniq, inverse = np.unique(flat, axis=0, return_inverse=True)
    nr_tiled = np.ascontiguousarray(np.broadcast_to(nr, uniq.shape).copy())
    vals = kernels.ml_root_batch(np.ascontiguousarray(uniq), nr_tiled)
    return vals[inverse].reshape(y.shape[:-1])


def _re_chunk(chunk_idx: int, sizes: tuple, config: ExperimentConfig):
    reps = sizes[chunk_idx]
    rng = np.random.default_rng([config.seed, chunk_idx])
    parent = config.make_parent()
    lam = config.weights()
    t = np.asarray(parent.quantile(np.asarray(config.p_grid)), dtype=np.float64)

    srs = parent.draw(rng, (reps, config.n))
    if config.common_random_numbers:
        rng_pns = np.random.default_rng([config.seed, chunk_idx])
    else:
        rng_pns = rng
    values, strata = draw_fixed_batch(
        parent, config.ranking(), lam, config.n, config.m, rng_pns, reps
    )

    edf_srs = (srs[:, :, None] <= t[None, None, :]).mean(axis=1)
    y = _pooled_counts(values, strata, config.m, t)
    nr = np.bincount(strata, minlength=config.m + 1)[1:].astype(np.int64)
    spec = DesignSpec.from_counts(nr)

    out = {"srs": Moments.of(edf_srs)}
    if "mb" in config.methods:
        table = g_inverse_batch(np.arange(config.n + 1) / config.n, spec)
        out["mb"] = Moments.of(table[y.sum(axis=2)])
    if "ml" in config.methods:
        out["ml"] = Moments.of(_ml_batch_fixed(y, nr))
    return out


def run_re_experiment(config: ExperimentConfig, threads: int | None = None) -> ExperimentResult:
    """Estimate RE(p) for the configured MinPNS design against SRS."""
    if config.replications < 1:
        raise ValueError("replications must be >= 1")
    threads = default_threads() if threads is None else threads
    sizes = tuple(_chunk_sizes(config.replications, config.chunk_size))
    chunks = _run_chunks(_re_chunk, (sizes, config), len(sizes), threads)

    merged = chunks[0]
    for c in chunks[1:]:
        merged = {k: merged[k].merge(c[k]) for k in merged}

    p = np.asarray(config.p_grid)
    srs_var = merged["srs"].variance
    records = []
    re_stderr = {}
    for method in config.methods:
        mom = merged[method]
        bias = mom.mean - p
        variance = mom.variance
        mse = variance + bias**2
        re = srs_var / mse
        # chunkwise RE spread -> Monte Carlo standard error of the RE estimate
        if len(chunks) > 1:
            chunk_re = np.array(
                [
                    c["srs"].variance / (c[method].variance + (c[method].mean - p) ** 2)
                    for c in chunks
                ]
            )
            re_stderr[method] = chunk_re.std(axis=0, ddof=1) / np.sqrt(len(chunks))
        for j, pj in enumerate(p):
            records.append(
                ResultRecord(
                    method=method,
                    n=config.n,
                    m=config.m,
                    scenario=config.scenario_label(),
                    rho=config.rho,
                    point=float(pj),
                    bias=float(bias[j]),
                    variance=float(variance[j]),
                    mse=float(mse[j]),
                    re=float(re[j]),
                )
            )
    return ExperimentResult(config, records, srs_var, re_stderr)


def run_are_curve(m: int, lam, f_grid, methods=("mb", "ml")) -> list:
    """Deterministic ARE(F) curve records; no simulation involved."""
    spec = DesignSpec(m=m, q=tuple(np.asarray(lam, dtype=np.float64)))
    records = []
    for method in methods:
        for F in f_grid:
            records.append(
                ResultRecord(
                    method=method,
                    n=0,
                    m=m,
                    scenario="(" + ",".join(f"{w:g}" for w in spec.q) + ")",
                    rho=None,
                    point=float(F),
                    bias=0.0,
                    variance=0.0,
                    mse=0.0,
                    re=are(float(F), spec, method),
                )
            )
    return records


def _dataset_chunk(
    chunk_idx: int,
    sizes: tuple,
    population: FinitePopulation,
    variable: str,
    reverse: bool,
    n: int,
    m: int,
    t: float,
    seed: int,
):
    reps = sizes[chunk_idx]
    rng = np.random.default_rng([seed, chunk_idx, n, m])
    srs = population.draw(rng, (reps, n))
    values, strata = draw_concomitant_batch(population, variable, n, m, rng, reps, reverse)

    edf_srs = (srs <= t).mean(axis=1)
    y = np.empty((reps, m), dtype=np.int64)
    nr = np.empty((reps, m), dtype=np.int64)
    hit = values <= t
    for r in range(1, m + 1):
        in_r = strata == r
        nr[:, r - 1] = in_r.sum(axis=1)
        y[:, r - 1] = (in_r & hit).sum(axis=1)

    # weights vary per replication (natural ties); solve each distinct
    # (counts, successes) configuration once
    combo = np.concatenate([nr, y], axis=1)
    uniq, inverse = np.unique(combo, axis=0, return_inverse=True)
    mb_u = np.empty(uniq.shape[0])
    ml_u = np.empty(uniq.shape[0])
    for k in range(uniq.shape[0]):
        nrow = np.ascontiguousarray(uniq[k, :m])
        yrow = np.ascontiguousarray(uniq[k, m:])
        q = np.ascontiguousarray(nrow / nrow.sum(), dtype=np.float64)
        mb_u[k] = kernels.g_inverse(yrow.sum() / nrow.sum(), q)
        ml_u[k] = kernels.ml_root(yrow, nrow)
    return {
        "srs": Moments.of(edf_srs[:, None]),
        "mb": Moments.of(mb_u[inverse][:, None]),
        "ml": Moments.of(ml_u[inverse][:, None]),
    }


def run_dataset_study(
    population: FinitePopulation,
    variable: str,
    reverse: bool,
    n_list,
    m_list,
    t: float,
    replications: int = 20_000,
    seed: int = DEFAULT_SEED,
    chunk_size: int = 1000,
    threads: int | None = None,
) -> list:
    """Bias/variance/RE table rows for concomitant-ranked MinPNS at threshold t."""
    threads = default_threads() if threads is None else threads
    true_f = float(np.count_nonzero(population.values <= t)) / population.size
    sizes = tuple(_chunk_sizes(replications, chunk_size))
    records = []
    for n in n_list:
        for m in m_list:
            chunks = _run_chunks(
                _dataset_chunk,
                (sizes, population, variable, reverse, n, m, t, seed),
                len(sizes),
                threads,
            )
            merged = chunks[0]
            for c in chunks[1:]:
                merged = {k: merged[k].merge(c[k]) for k in merged}
            srs_var = float(merged["srs"].variance[0])
            for method in ("mb", "ml"):
                mom = merged[method]
                bias = float(mom.mean[0]) - true_f
                variance = float(mom.variance[0])
                mse = variance + bias**2
                records.append(
                    ResultRecord(
                        method=method,
                        n=n,
                        m=m,
                        scenario="natural",
                        rho=None,
                        point=float(t),
                        bias=bias,
                        variance=variance,
                        mse=mse,
                        re=srs_var / mse,
                    )
                )
    return records
