"""Symbol evaluators against exact arithmetic, extended precision, and
brute-force permutation averages."""

import numpy as np
import pytest

from gkdvlab.errors import ConfigError
from gkdvlab.multiplier import IParams
from gkdvlab.symbols import (
    FrequencyTuple,
    alpha_k,
    arithmetic_identity_check,
    controlled_pair_check,
    double_mvt_ratio,
    m6_1,
    m6_2,
    m6_sym,
    m10_sym,
    mvt_ratio,
    sigma2,
    sigma6,
    smoothed_cubic_pair,
    symmetrize,
)

P = IParams(N=16.0, s=0.5)


def t6(*idx, scale=1.0):
    return FrequencyTuple(tuple(idx), scale)


def test_tuple_validation():
    with pytest.raises(ConfigError):
        FrequencyTuple((1, 2, 3), 1.0)  # arity
    with pytest.raises(ConfigError):
        FrequencyTuple((1, 2, 3, -5), 1.0)  # sum != 0


def test_alpha_cancelling_pair():
    assert alpha_k(FrequencyTuple((5, -5), 1.0)).im_coeff == 0.0


def test_alpha_direct_arithmetic():
    t = FrequencyTuple((1, 2, 3, -6), 0.5)
    assert abs(alpha_k(t).im_coeff - 0.5**3 * (1 + 8 + 27 - 216)) < 1e-12


def test_alpha_odd_under_negation():
    t = t6(4, 9, -2, -3, -3, -5)
    tn = t6(-4, -9, 2, 3, 3, 5)
    assert alpha_k(t).im_coeff == -alpha_k(tn).im_coeff


def test_alpha_concatenation_additivity():
    t2 = FrequencyTuple((7, -7), 1.0)
    t4 = FrequencyTuple((3, 5, -2, -6), 1.0)
    t6_ = t6(7, -7, 3, 5, -2, -6)
    assert abs(alpha_k(t6_).im_coeff
               - alpha_k(t2).im_coeff - alpha_k(t4).im_coeff) < 1e-12


def test_sigma2_cancelling_pair():
    from gkdvlab.multiplier import m_value

    xi = 24.0
    val = sigma2(FrequencyTuple((24, -24), 1.0), P)
    assert abs(val - 0.5 * m_value(xi, P) ** 2 * xi**2) < 1e-12


def test_sigma6_all_low_and_range():
    assert abs(sigma6(t6(1, 2, 3, -1, -2, -3), P) + 1.0 / 6.0) < 1e-15
    rng = np.random.default_rng(0)
    for _ in range(50):
        head = rng.integers(-100, 101, size=5)
        t = t6(*head, -int(np.sum(head)))
        v = sigma6(t, P)
        assert -1.0 / 6.0 <= v < 0.0


def test_m6_parts_all_low_cancel():
    t = t6(1, 5, -3, 2, -4, -1)
    total = m6_sym(t, P)
    assert total.im_coeff == 0.0 and total.re == 0.0
    assert m6_1(t, P).im_coeff == alpha_k(t).im_coeff / 6.0


def test_m6_1_vanishes_on_pairs():
    t = t6(20, -20, 33, -33, 5, -5)
    assert m6_1(t, P).im_coeff == 0.0


def test_m6_exhaustive_all_low_vanishing():
    # Every zero-sum 6-tuple with |idx| <= N vanishes identically.
    from itertools import combinations_with_replacement

    p = IParams(N=6.0, s=0.5)
    vals = range(-6, 7)
    count = 0
    for combo in combinations_with_replacement(vals, 5):
        last = -sum(combo)
        if not (-6 <= last <= 6) or last < combo[-1]:
            continue
        t = t6(*combo, last)
        v = m6_sym(t, p)
        assert v.im_coeff == 0.0
        count += 1
    assert count > 500


def test_m6_sym_permutation_invariance():
    from itertools import permutations

    rng = np.random.default_rng(1)
    head = rng.integers(-50, 51, size=5)
    t = t6(*head, -int(np.sum(head)))
    ref = m6_sym(t, P).im_coeff
    for perm in list(permutations(t.idx))[::103]:
        v = m6_sym(FrequencyTuple(perm, 1.0), P).im_coeff
        assert abs(v - ref) < 1e-12 * (1 + abs(ref))


def test_m6_against_extended_precision():
    # 128-bit reference of the raw formula on mixed low/high tuples.
    import mpmath as mp

    mp.mp.prec = 128

    def m_mp(xi, p):
        a = abs(xi)
        if a <= p.N:
            return mp.mpf(1)
        if a >= 2 * p.N:
            return (mp.mpf(p.N) / a) ** (1 - mp.mpf(p.s))
        t = mp.log(a / mp.mpf(p.N), 2)
        return mp.mpf(2) ** (-(1 - mp.mpf(p.s)) * t**3 * (3 - 2 * t))

    rng = np.random.default_rng(5)
    for _ in range(20):
        head = [int(v) for v in rng.integers(-200, 201, size=5)]
        idx = head + [-sum(head)]
        t = t6(*idx)
        ref1 = sum(m_mp(x, P) ** 2 * mp.mpf(x) ** 3 for x in idx) / 6
        ref2 = -mp.fprod([m_mp(x, P) for x in idx]) / 6 * sum(mp.mpf(x) ** 3 for x in idx)
        got = m6_sym(t, P).im_coeff
        assert abs(got - float(ref1 + ref2)) < 1e-12 * (1 + abs(got))


def test_symmetrize_fixes_symmetric_multiplier():
    t = t6(3, 9, -4, -8, 7, -7)
    val = symmetrize(lambda tt: sigma6(tt, P), t)
    assert abs(val - sigma6(t, P)) < 1e-14


def test_symmetrize_quadratic_pair():
    t = FrequencyTuple((11, -11), 1.0)
    val = symmetrize(lambda tt: tt.xi[0] * tt.xi[1], t)
    assert abs(val - (-(11.0**2))) < 1e-12


def test_symmetrize_slot_form_matches_explicit_m61():
    # The slot form built from the quadratic symbol averages to the
    # explicit sum-of-cubes expression.
    def slot(tt):
        s_last = -tt.xi[0]
        return -2j * sigma2(FrequencyTuple((tt.idx[0], -tt.idx[0]), tt.scale), P) * s_last

    rng = np.random.default_rng(9)
    head = rng.integers(-40, 41, size=5)
    t = t6(*head, -int(np.sum(head)))
    avg = symmetrize(slot, t)
    assert abs(avg.imag - m6_1(t, P).im_coeff) < 1e-12 * (1 + abs(avg.imag))
    assert abs(avg.real) < 1e-14


def test_m10_sym_all_low_zero():
    rng = np.random.default_rng(2)
    for _ in range(20):
        head = rng.integers(-3, 4, size=9)
        t = FrequencyTuple(tuple(head) + (-int(np.sum(head)),), 1.0)
        assert abs(m10_sym(t, P).im_coeff) < 1e-14


def test_m10_sym_cancelling_pairs_zero():
    t = FrequencyTuple((40, -40, 33, -33, 21, -21, 8, -8, 100, -100), 1.0)
    assert abs(m10_sym(t, P).im_coeff) < 1e-12


def test_m10_sym_matches_random_permutation_oracle():
    # Monte-Carlo average of the raw slot form over random permutations.
    rng = np.random.default_rng(11)
    head = [64, -70, 21, -17, 9, -4, 2, 1, -3]
    idx = tuple(head) + (-sum(head),)
    t = FrequencyTuple(idx, 1.0)

    def raw(perm):
        tail = perm[5:]
        ssum = float(np.sum(tail))
        xi5 = np.asarray(perm[:5], dtype=np.float64)
        from gkdvlab.multiplier import m_value

        s6 = -np.prod(m_value(np.concatenate([xi5, [ssum]]), P)) / 6.0
        return -6.0 * s6 * ssum  # i-coefficient of -6i [sigma6 * S]

    n_mc = 10_000
    samples = np.empty(n_mc)
    arr = np.array(idx)
    for k in range(n_mc):
        samples[k] = raw(arr[rng.permutation(10)])
    mc = samples.mean()
    err = 3.0 * samples.std() / np.sqrt(n_mc)
    exact = m10_sym(t, P).im_coeff
    assert abs(exact - mc) < max(err, 1e-12)


def test_arithmetic_identity_examples():
    assert arithmetic_identity_check(FrequencyTuple((1, 2, 3, -6), 1.0)) == 0
    assert arithmetic_identity_check(FrequencyTuple((5, -5, 9, -9), 1.0)) == 0


def test_arithmetic_identity_exhaustive_random():
    rng = np.random.default_rng(3)
    head = rng.integers(-100_000, 100_001, size=(100_000, 3))
    last = -np.sum(head, axis=1)
    lhs = np.sum(head.astype(object) ** 3, axis=1) + last.astype(object) ** 3
    rhs = 3 * (head[:, 0] + head[:, 1]).astype(object) \
        * (head[:, 0] + head[:, 2]).astype(object) \
        * (head[:, 0] + last).astype(object)
    assert np.all(lhs == rhs)


def test_mvt_cubic_closed_form_constant():
    a = lambda x: x**3
    b = lambda x: 4.0 * abs(x) ** 3
    rho = 0.01
    rng = np.random.default_rng(4)
    worst = 0.0
    for _ in range(200):
        xi = rng.uniform(1.0, 100.0) * rng.choice([-1, 1])
        eta = rho * abs(xi) * rng.uniform(-1, 1)
        worst = max(worst, mvt_ratio(a, b, xi, eta))
    assert worst <= 0.75 * (1 + rho) ** 2


def test_mvt_trivial_zero_offsets():
    a, b = smoothed_cubic_pair(P)
    assert mvt_ratio(a, b, 50.0, 0.0) == 0.0
    assert double_mvt_ratio(a, b, 50.0, 0.0, 0.0) == 0.0


def test_controlled_pair_smoothed_cubic_sweep():
    # Dyadic sweep 2N .. 2^10 N; constants recorded, finiteness asserted.
    a, b = smoothed_cubic_pair(P)
    sample = [2.0**k * P.N for k in range(1, 11)]
    rep = controlled_pair_check(a, b, sample, rho=0.01, n_offsets=16, seed=0)
    assert rep["ok"]
    assert rep["c_ratio"] <= 0.25 + 1e-12  # a = b/4 by construction
    assert rep["c_mvt"] < 5.0
    assert rep["c_double_mvt"] < 50.0


def test_separation_precondition():
    a, b = smoothed_cubic_pair(P)
    from gkdvlab.symbols import mvt_check

    with pytest.raises(ConfigError):
        mvt_check(a, b, 10.0, 5.0, c_max=10.0, rho=0.01)
