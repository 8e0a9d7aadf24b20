"""Pure-numpy implementations of the hot kernels.

Array-vectorized where possible; the combinatorial enumerations fall back
to plain Python loops with the same pruning as the numba twins.
"""

from __future__ import annotations

from itertools import combinations
from math import factorial

import numpy as np

_FACT = [factorial(k) for k in range(11)]
SUBSETS_10C5 = np.array(list(combinations(range(10), 5)), dtype=np.int64)  # (252, 5)


def m_batch(xi: np.ndarray, N: float, s: float) -> np.ndarray:
    """Multiplier values on an arbitrary array of frequencies."""
    a = np.abs(np.asarray(xi, dtype=np.float64))
    out = np.ones_like(a)
    high = a >= 2.0 * N
    np.power(N / np.where(high, a, 1.0), 1.0 - s, out=out, where=high)
    mid = (a > N) & ~high
    if np.any(mid):
        t = np.log2(a[mid] / N)
        out[mid] = 2.0 ** (-(1.0 - s) * t * t * t * (3.0 - 2.0 * t))
    return out


def _weight(tup, k_fact) -> float:
    """Multiset weight k!/prod(mult!)."""
    w = k_fact
    run = 1
    for i in range(1, len(tup)):
        if tup[i] == tup[i - 1]:
            run += 1
        else:
            if run > 1:
                w //= _FACT[run]
            run = 1
    if run > 1:
        w //= _FACT[run]
    return float(w)


def zero_sum_multisets_6(values: np.ndarray):
    """All nondecreasing 6-tuples from ``values`` (sorted, distinct ints)
    with zero sum, as position tuples plus symmetrization weights."""
    v = np.asarray(values, dtype=np.int64)
    J = len(v)
    if J == 0:
        return np.empty((0, 6), np.int32), np.empty(0, np.float64)
    vmax = int(v[-1])
    off = int(v[0])
    pos_lookup = {int(val): i for i, val in enumerate(v)}
    out = []
    weights = []
    for p1 in range(J):
        v1 = int(v[p1])
        if 6 * v1 > 0:
            break
        if v1 + 5 * vmax < 0:
            continue
        for p2 in range(p1, J):
            s2 = v1 + int(v[p2])
            if s2 + 4 * int(v[p2]) > 0:
                break
            if s2 + 4 * vmax < 0:
                continue
            for p3 in range(p2, J):
                s3 = s2 + int(v[p3])
                if s3 + 3 * int(v[p3]) > 0:
                    break
                if s3 + 3 * vmax < 0:
                    continue
                for p4 in range(p3, J):
                    s4 = s3 + int(v[p4])
                    if s4 + 2 * int(v[p4]) > 0:
                        break
                    if s4 + 2 * vmax < 0:
                        continue
                    for p5 in range(p4, J):
                        s5 = s4 + int(v[p5])
                        need = -s5
                        if need < int(v[p5]):
                            break
                        if need > vmax:
                            continue
                        q = pos_lookup.get(need, -1)
                        if q >= 0:
                            tup = (p1, p2, p3, p4, p5, q)
                            out.append(tup)
                            weights.append(_weight(tup, _FACT[6]))
    if not out:
        return np.empty((0, 6), np.int32), np.empty(0, np.float64)
    return np.array(out, dtype=np.int32), np.array(weights, dtype=np.float64)


def prefix_multisets_5(values: np.ndarray):
    """All nondecreasing 5-tuples of positions into ``values`` with weights."""
    J = len(values)
    out = []
    weights = []
    for p1 in range(J):
        for p2 in range(p1, J):
            for p3 in range(p2, J):
                for p4 in range(p3, J):
                    for p5 in range(p4, J):
                        tup = (p1, p2, p3, p4, p5)
                        out.append(tup)
                        weights.append(_weight(tup, _FACT[5]))
    if not out:
        return np.empty((0, 5), np.int32), np.empty(0, np.float64)
    return np.array(out, dtype=np.int32), np.array(weights, dtype=np.float64)


def _core6(xi: np.ndarray, N: float, s: float, k_much: float, c_gtr: float,
           r_sim: float, eps_rel: float):
    """Shared per-tuple quantities for 6-frequency symbol batches.

    Returns (m, sigma6, alpha_im, m61_im, chi_eff, flags) for xi of shape
    (T, 6).
    """
    m = m_batch(xi, N, s)
    sigma6 = -np.prod(m, axis=1) / 6.0
    c = xi**3
    alpha_im = np.sum(c, axis=1)
    mm = m * m
    m61_im = np.sum(mm * c, axis=1) / 6.0

    absxi = np.abs(xi)
    order = np.argsort(-absxi, axis=1, kind="stable")
    rows = np.arange(xi.shape[0])[:, None]
    xs = xi[rows, order]
    cs = c[rows, order]
    ms2 = mm[rows, order]
    ax = absxi[rows, order]

    a_, b_, c_, d_, e_, f_ = (ax[:, i] for i in range(6))
    xa, xb, xc, xd, xe, xf = (xs[:, i] for i in range(6))
    ca, cb, cc, cd, ce, cf = (cs[:, i] for i in range(6))

    omega1 = (
        (a_ <= r_sim * b_)
        & (b_ >= c_gtr * N)
        & (N >= k_much * c_)
        & (np.abs(ca + cb) >= k_much * np.abs(cc + cd + ce + cf))
    )
    omega2 = (c_ >= c_gtr * N) & (c_ >= k_much * d_)
    m2c4 = ms2[:, 0] * ca + ms2[:, 1] * cb + ms2[:, 2] * cc + ms2[:, 3] * cd
    omega3 = (
        (d_ >= c_gtr * N)
        & (N >= k_much * e_)
        & (np.abs(xa + xb) >= k_much * np.abs(xe + xf))
        & (np.abs(m2c4) >= k_much * np.abs(ce + cf))
        & (np.abs(xa + xb) * np.abs(xa + xc) * np.abs(xb + xc) >= k_much * e_ * a_ * a_)
    )
    in_omega = omega1 | omega2 | omega3
    guarded = in_omega & (np.abs(alpha_im) < eps_rel * a_**3)
    chi_eff = in_omega & ~guarded

    flags = (
        omega1.astype(np.uint8)
        | (omega2.astype(np.uint8) << 1)
        | (omega3.astype(np.uint8) << 2)
        | (guarded.astype(np.uint8) << 3)
    )
    return m, sigma6, alpha_im, m61_im, chi_eff, flags


def sigma_tilde6_batch(idx: np.ndarray, scale: float, N: float, s: float,
                       k_much: float, c_gtr: float, r_sim: float, eps_rel: float):
    """Corrected sextic symbol on integer tuples (T, 6); returns (value, flags)."""
    xi = np.asarray(idx, dtype=np.float64) * scale
    _, sigma6, alpha_im, m61_im, chi_eff, flags = _core6(
        xi, N, s, k_much, c_gtr, r_sim, eps_rel
    )
    corr = np.zeros_like(sigma6)
    np.divide(m61_im, alpha_im, out=corr, where=chi_eff)
    return -sigma6 - corr, flags


def m6_parts_batch(idx: np.ndarray, scale: float, N: float, s: float):
    """i-coefficients of the two symmetrized sextic symbol parts, (T,) each."""
    xi = np.asarray(idx, dtype=np.float64) * scale
    m = m_batch(xi, N, s)
    c = xi**3
    m61_im = np.sum(m * m * c, axis=1) / 6.0
    m62_im = -(np.prod(m, axis=1) * np.sum(c, axis=1)) / 6.0
    return m61_im, m62_im


def m10_block_batch(idx: np.ndarray, scale: float, N: float, s: float,
                    k_much: float, c_gtr: float, r_sim: float, eps_rel: float,
                    with_sigma_tilde: bool):
    """Block-symmetrized 10-symbol i-coefficient on integer tuples (T, 10).

    ``with_sigma_tilde=False`` gives the raw symmetrized symbol; ``True``
    replaces the sextic factor by its resonance-corrected sum, whose only
    surviving part is supported on the non-resonant sets.
    """
    idx = np.asarray(idx, dtype=np.int64)
    T = idx.shape[0]
    acc = np.zeros(T, dtype=np.float64)
    for srow in SUBSETS_10C5:
        sub = idx[:, srow]
        t_idx = -np.sum(sub, axis=1)
        xi6 = np.empty((T, 6), dtype=np.float64)
        xi6[:, :5] = sub * scale
        xi6[:, 5] = t_idx * scale
        _, sigma6, alpha_im, m61_im, chi_eff, _ = _core6(
            xi6, N, s, k_much, c_gtr, r_sim, eps_rel
        )
        if with_sigma_tilde:
            # sigma6 + sigma_tilde6 = -chi * m61/alpha
            term = np.zeros(T, dtype=np.float64)
            np.divide(m61_im, alpha_im, out=term, where=chi_eff)
            term = -term
        else:
            term = sigma6
        acc += term * (xi6[:, 5])
    return -(6.0 / 252.0) * acc
