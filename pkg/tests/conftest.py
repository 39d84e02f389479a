import numpy as np
import pytest

import pnskit._kernels_py as kernels_py

try:
    import pnskit._kernels as kernels_cy
except ImportError:
    kernels_cy = None

KERNEL_BACKENDS = [pytest.param(kernels_py, id="python")]
if kernels_cy is not None:
    KERNEL_BACKENDS.append(pytest.param(kernels_cy, id="compiled"))


@pytest.fixture(params=KERNEL_BACKENDS)
def kern(request):
    """Run kernel-level tests against every available backend."""
    return request.param


# The worked MinPNS example: n=10 sets of size m=5, tie rows as recorded.
EXAMPLE_VALUES = np.array(
    [0.884, 0.610, 0.753, 0.616, 0.690, 0.542, 0.576, 0.698, 0.769, 0.670]
)
EXAMPLE_TIES = np.array(
    [
        [1, 0, 0, 0, 0],
        [1, 1, 0, 0, 0],
        [1, 0, 0, 0, 0],
        [1, 1, 1, 1, 1],
        [1, 1, 1, 1, 0],
        [1, 0, 0, 0, 0],
        [1, 1, 1, 0, 0],
        [1, 1, 1, 0, 0],
        [1, 0, 0, 0, 0],
        [1, 1, 1, 0, 0],
    ],
    dtype=np.int64,
)


@pytest.fixture
def example_sample():
    from pnskit.estimators import PnsSample, TieMatrix

    return PnsSample.from_tie_matrix(EXAMPLE_VALUES, TieMatrix(EXAMPLE_TIES))
