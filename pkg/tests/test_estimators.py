"""Estimator and asymptotic-variance tests, anchored on the worked example."""

import numpy as np
import pytest

from pnskit.design import DesignSpec, Direction
from pnskit.estimators import (
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

from conftest import EXAMPLE_TIES, EXAMPLE_VALUES


def test_tie_matrix_validation():
    with pytest.raises(ValueError):
        TieMatrix(np.array([[0, 1], [1, 0]]))  # first column must be ones
    with pytest.raises(ValueError):
        TieMatrix(np.array([[1, 2]]))


def test_stratum_counts_worked_example():
    assert stratum_counts(TieMatrix(EXAMPLE_TIES)).tolist() == [4, 1, 3, 1, 1]


def test_stratum_counts_degenerate():
    pure_ns = np.zeros((7, 4), dtype=np.int64)
    pure_ns[:, 0] = 1
    assert stratum_counts(TieMatrix(pure_ns)).tolist() == [7, 0, 0, 0]
    fully_tied = np.ones((5, 4), dtype=np.int64)
    assert stratum_counts(TieMatrix(fully_tied)).tolist() == [0, 0, 0, 5]


def test_edf(example_sample):
    assert edf(example_sample, 0.56) == pytest.approx(0.1)
    assert edf(example_sample, 0.1) == 0.0
    assert edf(example_sample, 1.0) == 1.0


def test_worked_example_estimates(example_sample):
    mb = estimate_mb(example_sample, 0.56)
    ml = estimate_ml(example_sample, 0.56)
    assert mb.estimate == pytest.approx(0.0352, abs=5e-4)
    assert ml.estimate == pytest.approx(0.0357, abs=5e-4)
    assert mb.asymptotic_variance >= 0
    assert ml.asymptotic_variance >= 0


def test_estimates_at_extreme_thresholds(example_sample):
    assert estimate_mb(example_sample, 0.1).estimate == 0.0
    assert estimate_ml(example_sample, 0.1).estimate == 0.0
    assert estimate_mb(example_sample, 2.0).estimate == 1.0
    assert estimate_ml(example_sample, 2.0).estimate == 1.0


def test_m1_estimators_equal_edf():
    rng = np.random.default_rng(0)
    values = rng.random(40)
    sample = PnsSample(values, np.ones(40, dtype=np.int64), DesignSpec(1, (1.0,)))
    for t in (0.2, 0.5, 0.8):
        e = edf(sample, t)
        assert estimate_mb(sample, t).estimate == pytest.approx(e, abs=1e-9)
        assert estimate_ml(sample, t).estimate == pytest.approx(e, abs=1e-9)


def test_estimators_nondecreasing_in_t(example_sample):
    grid = np.linspace(0.5, 0.95, 30)
    mb = [estimate_mb(example_sample, t).estimate for t in grid]
    ml = [estimate_ml(example_sample, t).estimate for t in grid]
    assert all(a <= b + 1e-12 for a, b in zip(mb, mb[1:]))
    assert all(a <= b + 1e-12 for a, b in zip(ml, ml[1:]))


def test_estimators_permutation_invariant(example_sample):
    rng = np.random.default_rng(5)
    perm = rng.permutation(example_sample.n)
    shuffled = PnsSample(
        example_sample.values[perm], example_sample.strata[perm], example_sample.spec
    )
    for t in (0.56, 0.7):
        assert estimate_mb(shuffled, t).estimate == estimate_mb(example_sample, t).estimate
        assert estimate_ml(shuffled, t).estimate == estimate_ml(example_sample, t).estimate


def test_max_direction_estimates_reflect():
    # MaxPNS on values v is MinPNS on -v with the estimate reflected
    rng = np.random.default_rng(9)
    values = rng.random(30)
    strata = rng.integers(1, 4, size=30)
    counts = np.bincount(strata, minlength=4)[1:]
    smin = PnsSample(-values, strata, DesignSpec.from_counts(counts, Direction.MIN))
    smax = PnsSample(values, strata, DesignSpec.from_counts(counts, Direction.MAX))
    for t in (0.3, 0.5, 0.8):
        mb_max = estimate_mb(smax, t).estimate
        # P(Y <= t) = 1 - P(-Y < -t); with continuous values "<" vs "<=" needs
        # a nudge below -t
        mb_min = estimate_mb(smin, -t - 1e-12)
        assert mb_max == pytest.approx(1.0 - mb_min.estimate, abs=1e-9)


def test_var_srs():
    assert var_srs(0.5) == 0.25
    assert var_srs(0.0) == 0.0
    assert var_srs(1.0) == 0.0
    assert var_srs(0.061) == pytest.approx(0.057279, abs=1e-6)


def test_var_mb_reduces_to_srs():
    assert var_mb(0.3, DesignSpec(1, (1.0,))) == pytest.approx(var_srs(0.3))
    spec = DesignSpec(4, (0.0, 0.0, 0.0, 1.0))
    for F in (0.1, 0.5, 0.9):
        assert var_mb(F, spec) == pytest.approx(var_srs(F), abs=1e-12)
        assert var_ml(F, spec) == pytest.approx(var_srs(F), abs=1e-12)


def test_var_equal_for_degenerate_weights():
    for r in range(1, 4):
        q = [0.0, 0.0, 0.0]
        q[r - 1] = 1.0
        spec = DesignSpec(3, tuple(q))
        for F in (0.05, 0.3, 0.7):
            assert var_ml(F, spec) == pytest.approx(var_mb(F, spec), abs=1e-9)


def test_ml_variance_never_exceeds_mb():
    rng = np.random.default_rng(42)
    f_grid = np.arange(0.01, 1.0, 0.01)
    for m in range(2, 7):
        for _ in range(25):
            q = rng.dirichlet(np.ones(m))
            spec = DesignSpec(m, tuple(q))
            for F in f_grid[::7]:
                assert var_ml(F, spec) <= var_mb(F, spec) * (1 + 1e-9)


def test_variance_boundaries_zero():
    spec = DesignSpec(3, (0.5, 0.3, 0.2))
    assert var_mb(0.0, spec) == 0.0
    assert var_mb(1.0, spec) == 0.0
    assert var_ml(0.0, spec) == 0.0
    assert var_ml(1.0, spec) == 0.0


def test_are():
    spec1 = DesignSpec(1, (1.0,))
    for F in (0.2, 0.5, 0.8):
        assert are(F, spec1, "mb") == pytest.approx(1.0)
        assert are(F, spec1, "ml") == pytest.approx(1.0)
    spec_a = DesignSpec(3, (4 / 6, 1 / 6, 1 / 6))
    spec_b = DesignSpec(3, (2 / 6, 2 / 6, 2 / 6))
    spec_c = DesignSpec(3, (1 / 6, 1 / 6, 4 / 6))
    a, b, c = (are(0.05, s, "mb") for s in (spec_a, spec_b, spec_c))
    assert a > 1
    assert a >= b >= c
    with pytest.raises(ValueError):
        are(0.5, spec_a, "edf")


def test_log_likelihood_concavity():
    # second differences of the log-likelihood on a fine grid stay nonpositive
    from pnskit import kernels

    rng = np.random.default_rng(17)
    grid = np.arange(1e-3, 1.0, 1e-3)
    for _ in range(5):
        m = rng.integers(2, 6)
        nr = rng.integers(1, 12, size=m)
        yr = rng.integers(0, nr + 1)
        L = np.zeros_like(grid)
        for r in range(1, m + 1):
            F = np.array([kernels.stratum_cdf(p, r, m) for p in grid])
            L += yr[r - 1] * np.log(F) + (nr[r - 1] - yr[r - 1]) * np.log1p(-F)
        second = np.diff(L, 2)
        assert second.max() <= 1e-9


def test_successes_counts(example_sample):
    assert example_sample.successes(0.56).tolist() == [1, 0, 0, 0, 0]
    assert example_sample.successes(2.0).tolist() == [4, 1, 3, 1, 1]


def test_empty_sample_rejected():
    with pytest.raises(ValueError):
        PnsSample(np.array([]), np.array([], dtype=np.int64), DesignSpec(1, (1.0,)))
