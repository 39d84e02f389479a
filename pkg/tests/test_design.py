"""Public design-spec API: validation, direction reflection, clamping."""

import numpy as np
import pytest

from pnskit.design import (
    DesignSpec,
    Direction,
    beta_cdf,
    beta_pdf,
    g_inverse,
    g_inverse_batch,
    g_mix,
    g_mix_deriv,
    stratum_cdf,
    stratum_pdf,
)


def test_spec_validation():
    DesignSpec(3, (0.5, 0.25, 0.25))
    with pytest.raises(ValueError):
        DesignSpec(0, ())
    with pytest.raises(ValueError):
        DesignSpec(2, (0.7, 0.2))
    with pytest.raises(ValueError):
        DesignSpec(2, (1.2, -0.2))
    with pytest.raises(ValueError):
        DesignSpec(3, (0.5, 0.5))


def test_spec_from_counts():
    spec = DesignSpec.from_counts([4, 1, 3, 1, 1])
    assert spec.m == 5
    assert spec.q == pytest.approx((0.4, 0.1, 0.3, 0.1, 0.1))
    with pytest.raises(ValueError):
        DesignSpec.from_counts([0, 0])


def test_domain_errors():
    spec = DesignSpec(3, (0.5, 0.25, 0.25))
    with pytest.raises(ValueError):
        beta_cdf(1.5, 1, 3)
    with pytest.raises(ValueError):
        beta_cdf(0.5, 4, 3)
    with pytest.raises(ValueError):
        beta_pdf(-0.1, 1, 3)
    with pytest.raises(ValueError):
        stratum_cdf(0.5, 0, spec)
    with pytest.raises(ValueError):
        g_inverse(1.1, spec)


def test_max_direction_reflection_identity():
    # max-direction stratum CDF equals the direct top-r mixture
    spec = DesignSpec(4, (0.25, 0.25, 0.25, 0.25), Direction.MAX)
    m = spec.m
    from pnskit import kernels

    for r in range(1, m + 1):
        for x in np.linspace(0, 1, 21):
            direct = sum(kernels.beta_cdf(x, i, m) for i in range(m + 1 - r, m + 1)) / r
            assert stratum_cdf(x, r, spec) == pytest.approx(direct, abs=1e-12)


def test_max_direction_pdf_and_g():
    spec_min = DesignSpec(3, (0.5, 0.3, 0.2), Direction.MIN)
    spec_max = DesignSpec(3, (0.5, 0.3, 0.2), Direction.MAX)
    for x in np.linspace(0, 1, 11):
        assert g_mix(x, spec_max) == pytest.approx(1 - g_mix(1 - x, spec_min), abs=1e-12)
        assert stratum_pdf(x, 2, spec_max) == pytest.approx(
            stratum_pdf(1 - x, 2, spec_min), abs=1e-12
        )
    for x in np.linspace(0.05, 0.95, 7):
        assert g_mix_deriv(x, spec_max) > 0


def test_max_direction_inverse_round_trip():
    spec = DesignSpec(3, (0.6, 0.3, 0.1), Direction.MAX)
    for x in np.linspace(0.02, 0.98, 25):
        assert g_inverse(g_mix(x, spec), spec) == pytest.approx(x, abs=1e-10)


def test_g_inverse_batch_direction():
    spec = DesignSpec(3, (0.6, 0.3, 0.1), Direction.MAX)
    u = np.linspace(0, 1, 9)
    batch = g_inverse_batch(u, spec)
    for uu, xx in zip(u, batch):
        assert xx == pytest.approx(g_inverse(uu, spec), abs=1e-12)


def test_thread_safety_of_pure_functions():
    # pure functions over an immutable spec: concurrent calls agree with serial ones
    import concurrent.futures

    spec = DesignSpec(5, (0.4, 0.1, 0.3, 0.1, 0.1))
    xs = np.linspace(0.01, 0.99, 200)
    serial = [g_inverse(g_mix(x, spec), spec) for x in xs]
    with concurrent.futures.ThreadPoolExecutor(max_workers=8) as pool:
        parallel = list(pool.map(lambda x: g_inverse(g_mix(x, spec), spec), xs))
    assert serial == parallel
