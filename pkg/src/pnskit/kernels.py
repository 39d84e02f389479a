"""Backend selection for the hot beta-mixture kernels.

Prefers the compiled Cython extension; falls back to the pure-numpy
implementation when the extension is unavailable.  Set ``PNSKIT_FORCE_PY=1``
to force the fallback (used by the benchmark and the backend-parity tests).
"""

from __future__ import annotations

import os

from . import _kernels_py

if os.environ.get("PNSKIT_FORCE_PY"):
    _impl = _kernels_py
    BACKEND = "python"
else:
    try:
        from . import _kernels as _impl  # type: ignore[no-redef]

        BACKEND = "compiled"
    except ImportError:
        _impl = _kernels_py
        BACKEND = "python"

beta_cdf = _impl.beta_cdf
beta_pdf = _impl.beta_pdf
stratum_cdf = _impl.stratum_cdf
stratum_pdf = _impl.stratum_pdf
g_mix = _impl.g_mix
g_mix_deriv = _impl.g_mix_deriv
g_inverse = _impl.g_inverse
g_inverse_batch = _impl.g_inverse_batch
ml_root = _impl.ml_root
ml_root_batch = _impl.ml_root_batch
