"""Hot numeric kernels with a numba fast path and a pure-numpy fallback.

The backend is chosen once at import time from the environment variable
``GKDVLAB_KERNELS`` (``"numba"`` or ``"numpy"``).  Default is numba when it
imports, numpy otherwise.  Both implementations share the same function
surface and are cross-checked by the test suite; ``gkdvlab bench`` compares
their throughput.

Flag bits used by the resonance kernels:
  bit 0 / 1 / 2 : membership in the first / second / third non-resonant set
  bit 3         : near-resonance guard fired (indicator dropped)
"""

from __future__ import annotations

import os

FLAG_OMEGA1 = 1
FLAG_OMEGA2 = 2
FLAG_OMEGA3 = 4
FLAG_GUARDED = 8

_requested = os.environ.get("GKDVLAB_KERNELS", "").strip().lower()

if _requested not in ("", "numba", "numpy"):
    raise RuntimeError(
        f"GKDVLAB_KERNELS must be 'numba' or 'numpy', got {_requested!r}"
    )

BACKEND = "numpy"
if _requested in ("", "numba"):
    try:
        from gkdvlab.kernels import numba_impl as _impl

        BACKEND = "numba"
    except ImportError:
        if _requested == "numba":
            raise
        from gkdvlab.kernels import numpy_impl as _impl
else:
    from gkdvlab.kernels import numpy_impl as _impl

zero_sum_multisets_6 = _impl.zero_sum_multisets_6
prefix_multisets_5 = _impl.prefix_multisets_5
sigma_tilde6_batch = _impl.sigma_tilde6_batch
m6_parts_batch = _impl.m6_parts_batch
m10_block_batch = _impl.m10_block_batch
m_batch = _impl.m_batch

__all__ = [
    "BACKEND",
    "FLAG_OMEGA1",
    "FLAG_OMEGA2",
    "FLAG_OMEGA3",
    "FLAG_GUARDED",
    "zero_sum_multisets_6",
    "prefix_multisets_5",
    "sigma_tilde6_batch",
    "m6_parts_batch",
    "m10_block_batch",
    "m_batch",
]
