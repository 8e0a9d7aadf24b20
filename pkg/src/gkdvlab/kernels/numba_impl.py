"""Numba-compiled twins of the hot kernels.

Same function surface and same arithmetic ordering as ``numpy_impl`` so the
two backends agree to rounding.  Parallel kernels only write per-row
outputs; reductions happen in the callers in a fixed order, which keeps
results independent of the thread count.
"""

from __future__ import annotations

from itertools import combinations

import numpy as np
from numba import njit, prange

SUBSETS_10C5 = np.array(list(combinations(range(10), 5)), dtype=np.int64)

_FACT6 = 720.0
_FACT5 = 120.0


@njit(cache=True, inline="always")
def _m_scalar(xi: float, N: float, s: float) -> float:
    a = abs(xi)
    if a <= N:
        return 1.0
    if a >= 2.0 * N:
        return (N / a) ** (1.0 - s)
    t = np.log2(a / N)
    return 2.0 ** (-(1.0 - s) * t * t * t * (3.0 - 2.0 * t))


@njit(cache=True, parallel=True)
def _m_batch_impl(xi, N, s):
    out = np.empty(xi.size, dtype=np.float64)
    flat = xi.ravel()
    for i in prange(flat.size):
        out[i] = _m_scalar(flat[i], N, s)
    return out


def m_batch(xi, N: float, s: float):
    xi = np.ascontiguousarray(np.asarray(xi, dtype=np.float64))
    return _m_batch_impl(xi, N, s).reshape(xi.shape)


@njit(cache=True, inline="always")
def _core6_row(xi, N, s, k_much, c_gtr, r_sim, eps_rel, m, c, perm):
    """Fill m, c, perm for one row; return (sigma6, alpha, m61, chi, flags)."""
    for i in range(6):
        m[i] = _m_scalar(xi[i], N, s)
        c[i] = xi[i] ** 3
    sigma6 = -(m[0] * m[1] * m[2] * m[3] * m[4] * m[5]) / 6.0
    alpha_im = c[0] + c[1] + c[2] + c[3] + c[4] + c[5]
    m61_im = (
        m[0] * m[0] * c[0]
        + m[1] * m[1] * c[1]
        + m[2] * m[2] * c[2]
        + m[3] * m[3] * c[3]
        + m[4] * m[4] * c[4]
        + m[5] * m[5] * c[5]
    ) / 6.0

    # Stable insertion sort, descending by |xi|, ties keep original order.
    for i in range(6):
        perm[i] = i
    for i in range(1, 6):
        p = perm[i]
        key = abs(xi[p])
        j = i - 1
        while j >= 0 and abs(xi[perm[j]]) < key:
            perm[j + 1] = perm[j]
            j -= 1
        perm[j + 1] = p

    xa = xi[perm[0]]
    xb = xi[perm[1]]
    xc = xi[perm[2]]
    xd = xi[perm[3]]
    xe = xi[perm[4]]
    xf = xi[perm[5]]
    a_ = abs(xa)
    b_ = abs(xb)
    c_ = abs(xc)
    d_ = abs(xd)
    e_ = abs(xe)
    ca = c[perm[0]]
    cb = c[perm[1]]
    cc = c[perm[2]]
    cd = c[perm[3]]
    ce = c[perm[4]]
    cf = c[perm[5]]

    omega1 = (
        a_ <= r_sim * b_
        and b_ >= c_gtr * N
        and N >= k_much * c_
        and abs(ca + cb) >= k_much * abs(cc + cd + ce + cf)
    )
    omega2 = c_ >= c_gtr * N and c_ >= k_much * d_
    m2c4 = (
        m[perm[0]] * m[perm[0]] * ca
        + m[perm[1]] * m[perm[1]] * cb
        + m[perm[2]] * m[perm[2]] * cc
        + m[perm[3]] * m[perm[3]] * cd
    )
    omega3 = (
        d_ >= c_gtr * N
        and N >= k_much * e_
        and abs(xa + xb) >= k_much * abs(xe + xf)
        and abs(m2c4) >= k_much * abs(ce + cf)
        and abs(xa + xb) * abs(xa + xc) * abs(xb + xc) >= k_much * e_ * a_ * a_
    )
    in_omega = omega1 or omega2 or omega3
    guarded = in_omega and abs(alpha_im) < eps_rel * a_**3
    chi = in_omega and not guarded
    flags = np.uint8(0)
    if omega1:
        flags |= np.uint8(1)
    if omega2:
        flags |= np.uint8(2)
    if omega3:
        flags |= np.uint8(4)
    if guarded:
        flags |= np.uint8(8)
    return sigma6, alpha_im, m61_im, chi, flags


@njit(cache=True, parallel=True)
def _sigma_tilde6_impl(idx, scale, N, s, k_much, c_gtr, r_sim, eps_rel):
    T = idx.shape[0]
    val = np.empty(T, dtype=np.float64)
    flags = np.empty(T, dtype=np.uint8)
    for t in prange(T):
        xi = np.empty(6, dtype=np.float64)
        m = np.empty(6, dtype=np.float64)
        c = np.empty(6, dtype=np.float64)
        perm = np.empty(6, dtype=np.int64)
        for i in range(6):
            xi[i] = idx[t, i] * scale
        sigma6, alpha_im, m61_im, chi, fl = _core6_row(
            xi, N, s, k_much, c_gtr, r_sim, eps_rel, m, c, perm
        )
        corr = m61_im / alpha_im if chi else 0.0
        val[t] = -sigma6 - corr
        flags[t] = fl
    return val, flags


def sigma_tilde6_batch(idx, scale, N, s, k_much, c_gtr, r_sim, eps_rel):
    idx = np.ascontiguousarray(np.asarray(idx, dtype=np.int64))
    return _sigma_tilde6_impl(idx, scale, N, s, k_much, c_gtr, r_sim, eps_rel)


@njit(cache=True, parallel=True)
def _m6_parts_impl(idx, scale, N, s):
    T = idx.shape[0]
    m61 = np.empty(T, dtype=np.float64)
    m62 = np.empty(T, dtype=np.float64)
    for t in prange(T):
        prod = 1.0
        acc1 = 0.0
        acc_alpha = 0.0
        for i in range(6):
            xi = idx[t, i] * scale
            mv = _m_scalar(xi, N, s)
            cube = xi**3
            prod *= mv
            acc1 += mv * mv * cube
            acc_alpha += cube
        m61[t] = acc1 / 6.0
        m62[t] = -(prod * acc_alpha) / 6.0
    return m61, m62


def m6_parts_batch(idx, scale, N, s):
    idx = np.ascontiguousarray(np.asarray(idx, dtype=np.int64))
    return _m6_parts_impl(idx, scale, N, s)


@njit(cache=True, parallel=True)
def _m10_block_impl(idx, scale, N, s, k_much, c_gtr, r_sim, eps_rel,
                    with_sigma_tilde, subsets):
    T = idx.shape[0]
    out = np.empty(T, dtype=np.float64)
    n_sub = subsets.shape[0]
    for t in prange(T):
        xi6 = np.empty(6, dtype=np.float64)
        m = np.empty(6, dtype=np.float64)
        c = np.empty(6, dtype=np.float64)
        perm = np.empty(6, dtype=np.int64)
        acc = 0.0
        for k in range(n_sub):
            tsum = np.int64(0)
            for i in range(5):
                j = subsets[k, i]
                xi6[i] = idx[t, j] * scale
                tsum += idx[t, j]
            xi6[5] = -tsum * scale
            sigma6, alpha_im, m61_im, chi, _ = _core6_row(
                xi6, N, s, k_much, c_gtr, r_sim, eps_rel, m, c, perm
            )
            if with_sigma_tilde:
                term = -(m61_im / alpha_im) if chi else 0.0
            else:
                term = sigma6
            acc += term * xi6[5]
        out[t] = -(6.0 / 252.0) * acc
    return out


def m10_block_batch(idx, scale, N, s, k_much, c_gtr, r_sim, eps_rel,
                    with_sigma_tilde):
    idx = np.ascontiguousarray(np.asarray(idx, dtype=np.int64))
    return _m10_block_impl(
        idx, scale, N, s, k_much, c_gtr, r_sim, eps_rel,
        bool(with_sigma_tilde), SUBSETS_10C5,
    )


@njit(cache=True)
def _weight_of(tup, base):
    w = base
    run = 1
    for i in range(1, len(tup)):
        if tup[i] == tup[i - 1]:
            run += 1
        else:
            for r in range(2, run + 1):
                w /= r
            run = 1
    for r in range(2, run + 1):
        w /= r
    return w


@njit(cache=True)
def _zero_sum6_count(v, p1, vmax):
    J = len(v)
    v1 = v[p1]
    count = 0
    if 6 * v1 > 0 or v1 + 5 * vmax < 0:
        return 0
    for p2 in range(p1, J):
        s2 = v1 + v[p2]
        if s2 + 4 * v[p2] > 0:
            break
        if s2 + 4 * vmax < 0:
            continue
        for p3 in range(p2, J):
            s3 = s2 + v[p3]
            if s3 + 3 * v[p3] > 0:
                break
            if s3 + 3 * vmax < 0:
                continue
            for p4 in range(p3, J):
                s4 = s3 + v[p4]
                if s4 + 2 * v[p4] > 0:
                    break
                if s4 + 2 * vmax < 0:
                    continue
                for p5 in range(p4, J):
                    s5 = s4 + v[p5]
                    need = -s5
                    if need < v[p5]:
                        break
                    if need > vmax:
                        continue
                    count += 1
    return count


@njit(cache=True)
def _zero_sum6_fill(v, p1, vmax, pos_lookup, off, out, weights, start):
    J = len(v)
    v1 = v[p1]
    k = start
    if 6 * v1 > 0 or v1 + 5 * vmax < 0:
        return
    tup = np.empty(6, dtype=np.int32)
    for p2 in range(p1, J):
        s2 = v1 + v[p2]
        if s2 + 4 * v[p2] > 0:
            break
        if s2 + 4 * vmax < 0:
            continue
        for p3 in range(p2, J):
            s3 = s2 + v[p3]
            if s3 + 3 * v[p3] > 0:
                break
            if s3 + 3 * vmax < 0:
                continue
            for p4 in range(p3, J):
                s4 = s3 + v[p4]
                if s4 + 2 * v[p4] > 0:
                    break
                if s4 + 2 * vmax < 0:
                    continue
                for p5 in range(p4, J):
                    s5 = s4 + v[p5]
                    need = -s5
                    if need < v[p5]:
                        break
                    if need > vmax:
                        continue
                    q = pos_lookup[need - off]
                    if q >= 0:
                        tup[0] = p1
                        tup[1] = p2
                        tup[2] = p3
                        tup[3] = p4
                        tup[4] = p5
                        tup[5] = q
                        for i in range(6):
                            out[k, i] = tup[i]
                        weights[k] = _weight_of(tup, _FACT6)
                        k += 1


@njit(cache=True, parallel=True)
def _zero_sum6_impl(v):
    J = len(v)
    vmax = v[J - 1]
    off = v[0]
    span = vmax - off + 1
    pos_lookup = np.full(span, -1, dtype=np.int64)
    for i in range(J):
        pos_lookup[v[i] - off] = i

    # Pass 1: per-outer-index candidate counts (zero-sum hits only).
    counts = np.zeros(J + 1, dtype=np.int64)
    for p1 in prange(J):
        hits = 0
        v1 = v[p1]
        if not (6 * v1 > 0 or v1 + 5 * vmax < 0):
            for p2 in range(p1, J):
                s2 = v1 + v[p2]
                if s2 + 4 * v[p2] > 0:
                    break
                if s2 + 4 * vmax < 0:
                    continue
                for p3 in range(p2, J):
                    s3 = s2 + v[p3]
                    if s3 + 3 * v[p3] > 0:
                        break
                    if s3 + 3 * vmax < 0:
                        continue
                    for p4 in range(p3, J):
                        s4 = s3 + v[p4]
                        if s4 + 2 * v[p4] > 0:
                            break
                        if s4 + 2 * vmax < 0:
                            continue
                        for p5 in range(p4, J):
                            s5 = s4 + v[p5]
                            need = -s5
                            if need < v[p5]:
                                break
                            if need > vmax:
                                continue
                            if pos_lookup[need - off] >= 0:
                                hits += 1
        counts[p1 + 1] = hits

    offsets = np.cumsum(counts)
    total = offsets[J]
    out = np.empty((total, 6), dtype=np.int32)
    weights = np.empty(total, dtype=np.float64)

    for p1 in prange(J):
        _zero_sum6_fill(v, p1, vmax, pos_lookup, off, out, weights, offsets[p1])
    return out, weights


def zero_sum_multisets_6(values):
    v = np.ascontiguousarray(np.asarray(values, dtype=np.int64))
    if len(v) == 0:
        return np.empty((0, 6), np.int32), np.empty(0, np.float64)
    return _zero_sum6_impl(v)


@njit(cache=True)
def _prefix5_impl(J):
    total = 0
    for p1 in range(J):
        for p2 in range(p1, J):
            for p3 in range(p2, J):
                for p4 in range(p3, J):
                    total += J - p4
    out = np.empty((total, 5), dtype=np.int32)
    weights = np.empty(total, dtype=np.float64)
    tup = np.empty(5, dtype=np.int32)
    k = 0
    for p1 in range(J):
        for p2 in range(p1, J):
            for p3 in range(p2, J):
                for p4 in range(p3, J):
                    for p5 in range(p4, J):
                        tup[0] = p1
                        tup[1] = p2
                        tup[2] = p3
                        tup[3] = p4
                        tup[4] = p5
                        for i in range(5):
                            out[k, i] = tup[i]
                        weights[k] = _weight_of(tup, _FACT5)
                        k += 1
    return out, weights


def prefix_multisets_5(values):
    J = len(values)
    if J == 0:
        return np.empty((0, 5), np.int32), np.empty(0, np.float64)
    return _prefix5_impl(J)
