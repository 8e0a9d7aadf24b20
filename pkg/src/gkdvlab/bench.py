"""Throughput comparison of the numba and numpy kernel backends.

Times the enumeration scan, the corrected-symbol batch, the decade-subset
10-symbol batch, and the multiplier batch on representative sizes, checking
that both backends agree numerically while they race.
"""

from __future__ import annotations

import time

import numpy as np

from gkdvlab.resonance import Thresholds
from gkdvlab.sampling import gamma10_high_pair, stratified_gamma6


def _time(fn, repeat: int = 3) -> float:
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def run_bench(large: bool = False):
    """Returns rows (name, numpy_seconds, numba_seconds, agree)."""
    from gkdvlab.kernels import numpy_impl

    try:
        from gkdvlab.kernels import numba_impl
    except ImportError:
        numba_impl = None

    rng = np.random.default_rng(0)
    th = Thresholds()
    n_sig = 400_000 if large else 100_000
    n_m10 = 40_000 if large else 8_000
    j_enum = 41 if large else 29

    idx6, _ = stratified_gamma6(rng, n_sig, 64.0, th.k_much)
    idx10 = gamma10_high_pair(rng, n_m10, 64.0, th.k_much)
    values = np.array(sorted(rng.choice(np.arange(-3000, 3001), size=j_enum,
                                        replace=False)), dtype=np.int64)
    xi = rng.uniform(-500, 500, size=1_000_000 if large else 200_000)

    rows = []

    def compare(name, np_fn, nb_fn, check):
        if numba_impl is None:
            rows.append((name, _time(np_fn), float("nan"), True))
            return
        nb_fn()  # JIT warmup outside the timer
        t_np = _time(np_fn)
        t_nb = _time(nb_fn)
        rows.append((name, t_np, t_nb, check()))

    args6 = (idx6, 1.0, 64.0, 0.5, *th.kernel_args())
    compare(
        "corrected sextic symbol batch",
        lambda: numpy_impl.sigma_tilde6_batch(*args6),
        lambda: numba_impl.sigma_tilde6_batch(*args6),
        lambda: np.allclose(numpy_impl.sigma_tilde6_batch(*args6)[0],
                            numba_impl.sigma_tilde6_batch(*args6)[0],
                            rtol=1e-8, atol=1e-12),
    )
    args10 = (idx10, 1.0, 64.0, 0.5, *th.kernel_args(), True)
    compare(
        "block-symmetrized 10-symbol batch",
        lambda: numpy_impl.m10_block_batch(*args10),
        lambda: numba_impl.m10_block_batch(*args10),
        lambda: np.allclose(numpy_impl.m10_block_batch(*args10),
                            numba_impl.m10_block_batch(*args10),
                            rtol=1e-8, atol=1e-14),
    )
    compare(
        f"zero-sum 6-tuple enumeration (J={j_enum})",
        lambda: numpy_impl.zero_sum_multisets_6(values),
        lambda: numba_impl.zero_sum_multisets_6(values),
        lambda: np.array_equal(numpy_impl.zero_sum_multisets_6(values)[0],
                               numba_impl.zero_sum_multisets_6(values)[0]),
    )
    compare(
        "multiplier value batch",
        lambda: numpy_impl.m_batch(xi, 64.0, 0.5),
        lambda: numba_impl.m_batch(xi, 64.0, 0.5),
        lambda: np.allclose(numpy_impl.m_batch(xi, 64.0, 0.5),
                            numba_impl.m_batch(xi, 64.0, 0.5), rtol=1e-13),
    )
    return rows
