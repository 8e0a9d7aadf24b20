"""Exact evaluators for the multilinear frequency symbols.

All symbols live on integer tuples constrained to ``sum(idx) == 0`` and are
converted to physical frequencies ``xi = scale * idx`` at the last moment.
Purely imaginary symbols carry their i-coefficient as a real number
(``SymbolValue.im_coeff``), which keeps hot loops real and parity
invariants exact.

Conventions (dispersive symbol and the sextic pieces):

    alpha_k  = i (xi_1^3 + ... + xi_k^3)
    sigma2   = -(1/2) m(xi_1) m(xi_2) xi_1 xi_2
    sigma6   = -(1/6) m(xi_1) ... m(xi_6)
    M6^1     = (i/6) (m^2(xi_1) xi_1^3 + ... + m^2(xi_6) xi_6^3)
    M6^2     = sigma6 * alpha6
    [M6]     = M6^1 + M6^2

The symmetrized 10-symbol is evaluated in its distinguished-subset block
form: the generator is already symmetric inside the explicit 5-block and
inside the summed 5-block, so averaging over the 252 ways to choose the
explicit block equals the full permutation average (the random-permutation
oracle in the tests checks this numerically).  The operational constant in
front of the block average is ``-6i / 252 = -i / 42``.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations, permutations
from math import factorial

import numpy as np

from gkdvlab.errors import ConfigError
from gkdvlab.grids import Grid
from gkdvlab.multiplier import IParams, m_value

M10_BLOCK_CONSTANT = complex(0.0, -6.0 / 252.0)  # -i/42, recorded operationally

_ALLOWED_ARITIES = (2, 4, 6, 10)


@dataclass(frozen=True)
class FrequencyTuple:
    """An integer k-tuple on the zero-sum hyperplane, tied to a frequency scale."""

    idx: tuple[int, ...]
    scale: float

    def __post_init__(self):
        if len(self.idx) not in _ALLOWED_ARITIES:
            raise ConfigError(f"tuple arity must be one of {_ALLOWED_ARITIES}, got {len(self.idx)}")
        if sum(self.idx) != 0:
            raise ConfigError(f"tuple {self.idx} does not sum to zero")
        if not (self.scale > 0):
            raise ConfigError("frequency scale must be positive")

    @classmethod
    def on_grid(cls, idx, grid: Grid) -> "FrequencyTuple":
        return cls(tuple(int(i) for i in idx), grid.scale)

    @property
    def k(self) -> int:
        return len(self.idx)

    @property
    def xi(self) -> np.ndarray:
        return self.scale * np.asarray(self.idx, dtype=np.float64)


@dataclass(frozen=True)
class SymbolValue:
    """A complex symbol value split as ``re + i * im_coeff`` with exact parts."""

    re: float = 0.0
    im_coeff: float = 0.0

    def __add__(self, other: "SymbolValue") -> "SymbolValue":
        return SymbolValue(self.re + other.re, self.im_coeff + other.im_coeff)

    def __neg__(self) -> "SymbolValue":
        return SymbolValue(-self.re, -self.im_coeff)

    def as_complex(self) -> complex:
        return complex(self.re, self.im_coeff)


def alpha_k(t: FrequencyTuple) -> SymbolValue:
    """Dispersive symbol ``i * sum(xi^3)``; odd, vanishes on cancelling pairs."""
    return SymbolValue(0.0, float(np.sum(t.xi**3)))


def sigma2(t: FrequencyTuple, p: IParams) -> float:
    if t.k != 2:
        raise ConfigError("sigma2 needs a 2-tuple")
    x = t.xi
    return -0.5 * m_value(x[0], p) * m_value(x[1], p) * x[0] * x[1]


def sigma6(t: FrequencyTuple, p: IParams) -> float:
    if t.k != 6:
        raise ConfigError("sigma6 needs a 6-tuple")
    return -float(np.prod(m_value(t.xi, p))) / 6.0


def m6_1(t: FrequencyTuple, p: IParams) -> SymbolValue:
    if t.k != 6:
        raise ConfigError("m6_1 needs a 6-tuple")
    x = t.xi
    m = m_value(x, p)
    return SymbolValue(0.0, float(np.sum(m * m * x**3)) / 6.0)


def m6_2(t: FrequencyTuple, p: IParams) -> SymbolValue:
    if t.k != 6:
        raise ConfigError("m6_2 needs a 6-tuple")
    x = t.xi
    prod = float(np.prod(m_value(x, p)))
    # Divide by 6 last so the two symbol parts cancel exactly on all-low
    # tuples, where the multiplier weights are all exactly 1.
    return SymbolValue(0.0, -(prod * float(np.sum(x**3))) / 6.0)


def m6_sym(t: FrequencyTuple, p: IParams) -> SymbolValue:
    """Symmetrized derivative symbol of the first modified energy."""
    return m6_1(t, p) + m6_2(t, p)


def symmetrize(M, t: FrequencyTuple) -> complex:
    """Average ``M`` over all permutations of the tuple (arities <= 6).

    ``M`` maps a FrequencyTuple to float/complex/SymbolValue.  For arity 10
    use :func:`m10_sym`, which exploits the block structure instead of
    averaging ``10!`` permutations.
    """
    if t.k > 6:
        raise ConfigError("full permutation averaging is limited to arity <= 6")
    acc = 0.0 + 0.0j
    count = 0
    for perm in permutations(t.idx):
        v = M(FrequencyTuple(perm, t.scale))
        if isinstance(v, SymbolValue):
            v = v.as_complex()
        acc += v
        count += 1
    assert count == factorial(t.k)
    return acc / count


def m10_sym(t: FrequencyTuple, p: IParams) -> SymbolValue:
    """Block-symmetrized 10-symbol: ``-6i [sigma6(.,S) * S]_sym``."""
    if t.k != 10:
        raise ConfigError("m10_sym needs a 10-tuple")
    idx = t.idx
    acc = 0.0
    for sub in combinations(range(10), 5):
        tsum = -sum(idx[i] for i in sub)
        xi6 = t.scale * np.array([idx[sub[0]], idx[sub[1]], idx[sub[2]],
                                  idx[sub[3]], idx[sub[4]], tsum], dtype=np.float64)
        s6 = -float(np.prod(m_value(xi6, p))) / 6.0
        acc += s6 * xi6[5]
    return SymbolValue(0.0, -(6.0 / 252.0) * acc)


def arithmetic_identity_check(t: FrequencyTuple) -> int:
    """|sum of cubes - 3(x1+x2)(x1+x3)(x1+x4)| on a zero-sum 4-tuple, exact ints."""
    if t.k != 4:
        raise ConfigError("the arithmetic identity lives on 4-tuples")
    i1, i2, i3, i4 = (int(v) for v in t.idx)
    lhs = i1**3 + i2**3 + i3**3 + i4**3
    rhs = 3 * (i1 + i2) * (i1 + i3) * (i1 + i4)
    return abs(lhs - rhs)


# ---------------------------------------------------------------------------
# Mean-value-theorem toolkit for "a is controlled by b" symbol pairs.
# ---------------------------------------------------------------------------

def mvt_ratio(a, b, xi: float, eta: float) -> float:
    """``|a(xi+eta) - a(xi)| / (|eta| b(xi) / |xi|)``; the MVT constant."""
    denom = abs(eta) * b(xi) / abs(xi)
    if denom == 0.0:
        return 0.0
    return abs(a(xi + eta) - a(xi)) / denom


def double_mvt_ratio(a, b, xi: float, eta: float, lam: float) -> float:
    """Second-difference ratio ``|a(xi+eta+lam)-a(xi+eta)-a(xi+lam)+a(xi)| /
    (|eta||lam| b(xi)/xi^2)``."""
    denom = abs(eta) * abs(lam) * b(xi) / xi**2
    if denom == 0.0:
        return 0.0
    num = abs(a(xi + eta + lam) - a(xi + eta) - a(xi + lam) + a(xi))
    return num / denom


def mvt_check(a, b, xi: float, eta: float, c_max: float, rho: float = 0.01) -> bool:
    if abs(eta) > rho * abs(xi):
        raise ConfigError(f"separation violated: |eta|={abs(eta)} > rho*|xi|={rho * abs(xi)}")
    return mvt_ratio(a, b, xi, eta) <= c_max


def double_mvt_check(a, b, xi: float, eta: float, lam: float, c_max: float,
                     rho: float = 0.01) -> bool:
    if abs(eta) > rho * abs(xi) or abs(lam) > rho * abs(xi):
        raise ConfigError("separation violated in double mean value check")
    return double_mvt_ratio(a, b, xi, eta, lam) <= c_max


def controlled_pair_check(a, b, sample, rho: float = 0.01, n_offsets: int = 8,
                          seed: int = 0) -> dict:
    """Empirical mean-value-theorem constants for the pair ``(a, b)``.

    For every ``xi`` in ``sample`` draws offsets ``|eta|, |lam| <= rho |xi|``
    and records the worst first- and second-difference ratios.  Also reports
    the direct control ratios ``a/b``.  Constants are reported, not asserted.
    """
    rng = np.random.default_rng(seed)
    c_mvt = 0.0
    c_dmvt = 0.0
    c_ratio = 0.0
    for xi in sample:
        xi = float(xi)
        if xi == 0.0:
            raise ConfigError("sample points must be nonzero")
        if b(xi) > 0:
            c_ratio = max(c_ratio, abs(a(xi)) / b(xi))
        for _ in range(n_offsets):
            eta, lam = rho * abs(xi) * rng.uniform(-1.0, 1.0, size=2)
            c_mvt = max(c_mvt, mvt_ratio(a, b, xi, eta))
            c_dmvt = max(c_dmvt, double_mvt_ratio(a, b, xi, eta, lam))
    return {
        "c_mvt": c_mvt,
        "c_double_mvt": c_dmvt,
        "c_ratio": c_ratio,
        "rho": rho,
        "n_points": len(list(sample)),
        "ok": np.isfinite(c_mvt) and np.isfinite(c_dmvt),
    }


def smoothed_cubic_pair(p: IParams):
    """The controlled pair ``a = m^2 |xi|^3`` against ``b = 4 m^2 |xi|^3``."""

    def a(xi: float) -> float:
        mv = m_value(xi, p)
        return mv * mv * abs(xi) ** 3

    def b(xi: float) -> float:
        return 4.0 * a(xi)

    return a, b
