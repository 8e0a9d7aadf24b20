"""Stratified integer-tuple samplers for the symbol-bound verifiers.

Uniform random tuples almost never land in thin regions such as the third
non-resonant set, so samples are stratified by the frequency-magnitude
patterns of the proof's case analysis: high cancelling pairs, three-high
configurations, four comparable highs with each admissible sign pattern,
one dominant mode, near-resonant perturbations of pair configurations,
all-low tuples, and a uniform baseline.  Every stratum returns tuples that
satisfy the zero-sum constraint exactly in integer arithmetic; actual
membership in the non-resonant sets is always re-evaluated by predicates,
the stratum only steers where samples fall.
"""

from __future__ import annotations

import numpy as np

_MAG_CAP = 1 << 19  # keeps cubes of 6-tuples comfortably inside float64/int64

GAMMA6_STRATA = (
    "high_pair",
    "high_pair_offset",
    "three_high",
    "one_dominant",
    "four_high_pmmm",
    "four_high_pmpm",
    "four_high_pmmp",
    "four_high_ppmm",
    "near_resonant",
    "all_low",
    "uniform",
)


def _log_mags(rng: np.random.Generator, lo: float, hi: float, size: int) -> np.ndarray:
    lo = max(1.0, lo)
    hi = max(lo + 1.0, hi)
    out = np.exp(rng.uniform(np.log(lo), np.log(hi), size=size))
    return np.minimum(np.round(out), _MAG_CAP).astype(np.int64)


def _signs(rng: np.random.Generator, size) -> np.ndarray:
    return rng.choice(np.array([-1, 1], dtype=np.int64), size=size)


def _lows(rng: np.random.Generator, n: int, k: int, cap: float) -> np.ndarray:
    c = max(1, int(cap))
    return rng.integers(-c, c + 1, size=(n, k)).astype(np.int64)


def _solve_last(parts: list[np.ndarray]) -> np.ndarray:
    cols = [np.asarray(p, dtype=np.int64).reshape(len(parts[0]), -1) for p in parts]
    head = np.concatenate(cols, axis=1)
    last = -np.sum(head, axis=1, keepdims=True)
    return np.concatenate([head, last], axis=1)


def _high_pair(rng, n, N, k_much, octaves):
    h = _signs(rng, n) * _log_mags(rng, N, N * 2.0**octaves, n)
    lows = _lows(rng, n, 4, max(1.0, N / k_much))
    return _solve_last([h, lows])


def _high_pair_offset(rng, n, N, k_much, octaves):
    # Near-cancelling high pair: the partner is solved so it sits within a
    # small offset of the mirror; tests the first-set boundary.
    h = _signs(rng, n) * _log_mags(rng, N, N * 2.0**octaves, n)
    off = rng.integers(-3, 4, size=n).astype(np.int64)
    lows = _lows(rng, n, 3, max(1.0, N / k_much))
    return _solve_last([h, off - h, lows])


def _three_high(rng, n, N, k_much, octaves):
    h1 = _signs(rng, n) * _log_mags(rng, 2 * N, N * 2.0**octaves, n)
    h3 = _signs(rng, n) * _log_mags(rng, N, 4 * N, n)
    lows = _lows(rng, n, 2, max(1.0, N / (2 * k_much)))
    tiny = _lows(rng, n, 1, 1.0)
    return _solve_last([h1, h3, lows, tiny])


def _one_dominant(rng, n, N, k_much, octaves):
    h1 = _signs(rng, n) * _log_mags(rng, 8 * N, N * 2.0**octaves, n)
    h3 = _signs(rng, n) * _log_mags(rng, N, 2 * N, n)
    h4 = -np.sign(h3) * _log_mags(rng, N, 2 * N, n)
    lows = _lows(rng, n, 2, max(1.0, N / k_much))
    return _solve_last([h1, h3, h4, lows])


def _four_high(signs: tuple[int, int, int, int]):
    def sample(rng, n, N, k_much, octaves):
        base = _log_mags(rng, 2 * N, N * 2.0**octaves, n).astype(np.float64)
        jit = rng.uniform(0.6, 1.4, size=(n, 3))
        v1 = (signs[0] * base).astype(np.int64)
        v2 = (signs[1] * base * jit[:, 0]).astype(np.int64)
        v3 = (signs[2] * base * jit[:, 1]).astype(np.int64)
        v4 = (signs[3] * base * jit[:, 2]).astype(np.int64)
        # Balance so the solved slot stays low: shift v4 by the running sum
        # minus a genuinely low remainder.
        lows = _lows(rng, n, 1, max(1.0, N / k_much))
        resid = v1 + v2 + v3 + v4 + lows[:, 0]
        v4 = v4 - resid + rng.integers(-2, 3, size=n)
        return _solve_last([v1, v2, v3, v4, lows])

    return sample


def _near_resonant(rng, n, N, k_much, octaves):
    h = _signs(rng, n) * _log_mags(rng, N, N * 2.0**octaves, n)
    l1 = _signs(rng, n) * _log_mags(rng, 1, max(2.0, N / k_much), n)
    d1 = rng.integers(-1, 2, size=n).astype(np.int64)
    d2 = rng.integers(-1, 2, size=n).astype(np.int64)
    return _solve_last([h, -h + d1, l1, -l1 + d2, -d1 - d2])


def _all_low(rng, n, N, k_much, octaves):
    cap = max(1, int(N))
    for _ in range(64):
        head = rng.integers(-cap, cap + 1, size=(n, 5)).astype(np.int64)
        last = -np.sum(head, axis=1)
        ok = np.abs(last) <= cap
        if np.count_nonzero(ok) >= max(1, n // 2):
            break
    head = head[ok][:n]
    last = last[ok][:n]
    reps = int(np.ceil(n / max(1, len(head))))
    head = np.tile(head, (reps, 1))[:n]
    last = np.tile(last, reps)[:n]
    return np.concatenate([head, last[:, None]], axis=1)


def _uniform(rng, n, N, k_much, octaves):
    R = max(2, int(N * 2.0**octaves))
    head = rng.integers(-R, R + 1, size=(n, 5)).astype(np.int64)
    return _solve_last([head])


_GAMMA6_SAMPLERS = {
    "high_pair": _high_pair,
    "high_pair_offset": _high_pair_offset,
    "three_high": _three_high,
    "one_dominant": _one_dominant,
    "four_high_pmmm": _four_high((1, -1, -1, -1)),
    "four_high_pmpm": _four_high((1, -1, 1, -1)),
    "four_high_pmmp": _four_high((1, -1, -1, 1)),
    "four_high_ppmm": _four_high((1, 1, -1, -1)),
    "near_resonant": _near_resonant,
    "all_low": _all_low,
    "uniform": _uniform,
}


def stratified_gamma6(rng: np.random.Generator, n_samples: int, N: float,
                      k_much: float, octaves: float = 6.0):
    """Sample ``n_samples`` zero-sum 6-tuples across all strata.

    Returns ``(idx, stratum)`` where ``idx`` is (n, 6) int64 and ``stratum``
    holds indices into :data:`GAMMA6_STRATA`.
    """
    if n_samples <= 0:
        raise ValueError("sampling plan is empty")
    names = GAMMA6_STRATA
    per = [n_samples // len(names)] * len(names)
    per[0] += n_samples - sum(per)
    blocks = []
    labels = []
    for sid, (name, count) in enumerate(zip(names, per)):
        if count == 0:
            continue
        block = _GAMMA6_SAMPLERS[name](rng, count, N, k_much, octaves)
        blocks.append(block)
        labels.append(np.full(len(block), sid, dtype=np.int16))
    idx = np.concatenate(blocks, axis=0)
    stratum = np.concatenate(labels)
    assert np.all(np.sum(idx, axis=1) == 0)
    return idx, stratum


def gamma10_high_pair(rng: np.random.Generator, n_samples: int, N: float,
                      k_much: float, octaves: float = 6.0) -> np.ndarray:
    """Zero-sum 10-tuples with two comparable high modes and eight low ones.

    This is the frequency configuration of the 10-symbol pointwise bound:
    the two largest entries are a near-cancelling pair above the threshold
    and everything else sits far below it.  The third-largest magnitude is
    kept nonzero so the bound's denominator never vanishes.
    """
    if n_samples <= 0:
        raise ValueError("sampling plan is empty")
    h = _signs(rng, n_samples) * _log_mags(rng, N, N * 2.0**octaves, n_samples)
    cap = max(1, int(N / k_much))
    lows = rng.integers(-cap, cap + 1, size=(n_samples, 8)).astype(np.int64)
    # Force a nonzero third-largest magnitude, and let the second high mode
    # absorb the low-mode sum so the pair is near- but not exactly
    # cancelling (the corrected symbol vanishes on exact pairs).
    lows[:, 0] = np.where(lows[:, 0] == 0, 1, lows[:, 0])
    out = _solve_last([h, lows])  # solved slot = -(h + sum lows) ~ -h
    assert np.all(np.sum(out, axis=1) == 0)
    return out


def gamma10_cancelling_pairs(rng: np.random.Generator, n_samples: int, N: float,
                             octaves: float = 6.0) -> np.ndarray:
    """Five cancelling pairs spanning low and high scales."""
    mags = np.stack(
        [_log_mags(rng, 1, N * 2.0**octaves, n_samples) for _ in range(5)], axis=1
    )
    signs = _signs(rng, (n_samples, 5))
    half = mags * signs
    out = np.empty((n_samples, 10), dtype=np.int64)
    out[:, 0::2] = half
    out[:, 1::2] = -half
    return out
