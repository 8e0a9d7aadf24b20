"""Backend equivalence: the numba twins must agree with the numpy reference."""

import numpy as np
import pytest

from gkdvlab.kernels import numpy_impl

numba_impl = pytest.importorskip("gkdvlab.kernels.numba_impl")

from gkdvlab.resonance import Thresholds
from gkdvlab.sampling import gamma10_high_pair, stratified_gamma6

TH = Thresholds()


def test_backend_flag_valid():
    from gkdvlab import kernels

    assert kernels.BACKEND in ("numba", "numpy")


def test_m_batch_equivalence():
    rng = np.random.default_rng(0)
    xi = rng.uniform(-1000, 1000, size=20_000)
    a = numpy_impl.m_batch(xi, 32.0, 0.4)
    b = numba_impl.m_batch(xi, 32.0, 0.4)
    assert np.max(np.abs(a - b)) < 1e-14


def test_sigma_tilde_equivalence():
    rng = np.random.default_rng(1)
    idx, _ = stratified_gamma6(rng, 30_000, 64.0, TH.k_much)
    va, fa = numpy_impl.sigma_tilde6_batch(idx, 1.0, 64.0, 0.5, *TH.kernel_args())
    vb, fb = numba_impl.sigma_tilde6_batch(idx, 1.0, 64.0, 0.5, *TH.kernel_args())
    assert np.array_equal(fa, fb)
    # Values agree to rounding; the quotient near the resonance guard
    # amplifies single-ulp differences, hence the loose relative bound.
    assert np.max(np.abs(va - vb) / (np.abs(vb) + 1e-30)) < 1e-8


def test_m6_parts_equivalence():
    rng = np.random.default_rng(2)
    idx, _ = stratified_gamma6(rng, 20_000, 32.0, TH.k_much)
    a1, a2 = numpy_impl.m6_parts_batch(idx, 0.5, 16.0, 0.5)
    b1, b2 = numba_impl.m6_parts_batch(idx, 0.5, 16.0, 0.5)
    # Massive cancellations inside the cube sums amplify ulp-order
    # summation differences; compare against the term magnitude.
    term_scale = (np.max(np.abs(idx), axis=1) * 0.5) ** 3 + 1.0
    assert np.max(np.abs(a1 - b1) / term_scale) < 1e-13
    assert np.max(np.abs(a2 - b2) / term_scale) < 1e-13


def test_m10_block_equivalence():
    rng = np.random.default_rng(3)
    idx = gamma10_high_pair(rng, 2_000, 32.0, TH.k_much)
    for flag in (False, True):
        a = numpy_impl.m10_block_batch(idx, 1.0, 32.0, 0.5, *TH.kernel_args(), flag)
        b = numba_impl.m10_block_batch(idx, 1.0, 32.0, 0.5, *TH.kernel_args(), flag)
        assert np.allclose(a, b, rtol=1e-8, atol=1e-12)


@pytest.mark.parametrize("J", [5, 12, 25])
def test_enumeration_equivalence(J):
    rng = np.random.default_rng(J)
    values = np.array(sorted(rng.choice(np.arange(-60, 61), size=J, replace=False)),
                      dtype=np.int64)
    ta, wa = numpy_impl.zero_sum_multisets_6(values)
    tb, wb = numba_impl.zero_sum_multisets_6(values)
    assert np.array_equal(ta, tb)
    assert np.array_equal(wa, wb)
    # Every tuple sums to zero and is nondecreasing, with correct weights.
    if len(ta):
        vals = values[ta]
        assert np.all(np.sum(vals, axis=1) == 0)
        assert np.all(np.diff(ta, axis=1) >= 0)


def test_enumeration_matches_bruteforce():
    from itertools import combinations_with_replacement
    from math import factorial

    values = np.array([-7, -4, -1, 0, 2, 5, 6], dtype=np.int64)
    expect = []
    for combo in combinations_with_replacement(range(len(values)), 6):
        if int(np.sum(values[list(combo)])) == 0:
            expect.append(combo)
    ta, wa = numpy_impl.zero_sum_multisets_6(values)
    assert sorted(map(tuple, ta.tolist())) == sorted(expect)
    for tup, w in zip(ta.tolist(), wa):
        mult = 720.0
        for v in set(tup):
            mult /= factorial(tup.count(v))
        assert w == mult


def test_prefix_enumeration_equivalence():
    values = np.arange(-5, 6, dtype=np.int64)
    ta, wa = numpy_impl.prefix_multisets_5(values)
    tb, wb = numba_impl.prefix_multisets_5(values)
    assert np.array_equal(ta, tb) and np.array_equal(wa, wb)
    from math import comb

    assert len(ta) == comb(len(values) + 4, 5)


def test_env_flag_selects_backend():
    import subprocess
    import sys

    for want in ("numpy", "numba"):
        out = subprocess.run(
            [sys.executable, "-c",
             "from gkdvlab import kernels; print(kernels.BACKEND)"],
            env={"GKDVLAB_KERNELS": want, "PATH": "/usr/bin:/bin",
                 "HOME": "/root"},
            capture_output=True, text=True)
        assert out.stdout.strip() == want, out.stderr
