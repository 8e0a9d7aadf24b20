"""Conserved and modified energies, and the k-linear frequency quadrature.

The k-linear functional of a multiplier ``M`` over active modes is the
direct sum over integer tuples with exact zero sum,

    Lambda_k(M) = L^(1-k) * sum_{j_1+...+j_k=0} M(xi) * prod uhat(xi_j),

whose normalization is pinned by the requirement that
``Lambda_2(sigma2) + Lambda_6(sigma6)`` reproduces the first modified
energy exactly (this fixes the open power of 2*pi after discretization).
Symmetric multipliers are summed over sorted tuples with multiplicity
weights; the indicator-bearing symbols cannot be factored through FFTs,
which is why direct summation is the primary path.

The sextic correction term of the second modified energy is evaluated in
split form,

    Lambda_6(sigma_tilde6) = (1/6) ||Iu||_L6^6  +  Lambda_6(sigma_tilde6 + sigma6),

because the second piece is supported only on the non-resonant sets (it
vanishes off them identically): the bulk sextic is then exact independent
of the active-mode floor, and only the indicator-supported correction is
summed over tuples.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations_with_replacement
from math import factorial

import numpy as np

from gkdvlab import kernels
from gkdvlab.errors import BudgetError, ConfigError, RealityError
from gkdvlab.grids import (
    Field,
    Grid,
    Spectrum,
    derivative,
    fft_index,
    forward_transform,
    inverse_transform,
    sobolev_norm_spectrum,
)
from gkdvlab.multiplier import IParams, m_table
from gkdvlab.resonance import Thresholds

DEFAULT_FLOOR = 1e-12
DEFAULT_LAMBDA6_BUDGET = 200_000_000  # candidate prefixes scanned, not tuples kept
LAMBDA10_MAX_MODES = 8
REAL_RESIDUE_TOL = 1e-10


@dataclass(frozen=True)
class ActiveModeSet:
    """Signed integer frequency indices with magnitude above a relative floor."""

    values: np.ndarray  # sorted ascending, int64
    floor: float

    def __post_init__(self):
        v = np.asarray(self.values, dtype=np.int64)
        if v.ndim != 1 or np.any(np.diff(v) <= 0):
            raise ConfigError("active mode values must be strictly increasing")
        object.__setattr__(self, "values", v)

    @classmethod
    def from_spectrum(cls, s: Spectrum, floor: float = DEFAULT_FLOOR) -> "ActiveModeSet":
        g = s.grid
        mags = np.abs(s.coeffs)
        top = float(np.max(mags))
        if top == 0.0:
            return cls(np.empty(0, dtype=np.int64), floor)
        keep = mags >= floor * top
        keep[g.nyquist_index()] = False
        idx = g.freq_index[keep]
        # Real fields have mirror-symmetric magnitudes; enforce the symmetry
        # so parity cancellations in the tuple sums are exact.
        sym = np.unique(np.concatenate([idx, -idx]))
        sym = sym[np.abs(sym) < g.n // 2]
        return cls(np.sort(sym).astype(np.int64), floor)

    @classmethod
    def from_indices(cls, idx, floor: float = DEFAULT_FLOOR) -> "ActiveModeSet":
        return cls(np.sort(np.unique(np.asarray(idx, dtype=np.int64))), floor)

    def __len__(self) -> int:
        return len(self.values)


# ---------------------------------------------------------------------------
# Tuple enumeration with caching.
# ---------------------------------------------------------------------------

_ENUM_CACHE: dict = {}
_ENUM_CACHE_MAX = 128


def _cached(key, builder):
    hit = _ENUM_CACHE.get(key)
    if hit is None:
        if len(_ENUM_CACHE) >= _ENUM_CACHE_MAX:
            _ENUM_CACHE.clear()
        hit = builder()
        _ENUM_CACHE[key] = hit
    return hit


def _pairs_zero_sum(values: np.ndarray):
    present = set(int(v) for v in values)
    pos = {int(v): i for i, v in enumerate(values)}
    tuples = []
    weights = []
    for v in values:
        v = int(v)
        if v < 0 and -v in present:
            tuples.append((pos[v], pos[-v]))
            weights.append(2.0)
        elif v == 0:
            tuples.append((pos[0], pos[0]))
            weights.append(1.0)
    if not tuples:
        return np.empty((0, 2), np.int32), np.empty(0, np.float64)
    return np.array(tuples, dtype=np.int32), np.array(weights, dtype=np.float64)


def _tuples_zero_sum_10(values: np.ndarray):
    if len(values) > LAMBDA10_MAX_MODES:
        raise BudgetError(
            f"10-linear sums are limited to {LAMBDA10_MAX_MODES} active modes, "
            f"got {len(values)}; raise the active-mode floor"
        )
    tuples = []
    weights = []
    f10 = float(factorial(10))
    for combo in combinations_with_replacement(range(len(values)), 10):
        if int(np.sum(values[list(combo)])) == 0:
            w = f10
            run = 1
            for i in range(1, 10):
                if combo[i] == combo[i - 1]:
                    run += 1
                else:
                    w /= factorial(run)
                    run = 1
            w /= factorial(run)
            tuples.append(combo)
            weights.append(w)
    if not tuples:
        return np.empty((0, 10), np.int32), np.empty(0, np.float64)
    return np.array(tuples, dtype=np.int32), np.array(weights, dtype=np.float64)


def zero_sum_tuples(modes: ActiveModeSet, k: int, budget: int = DEFAULT_LAMBDA6_BUDGET):
    """Sorted zero-sum k-tuples (as positions into ``modes.values``) + weights."""
    v = modes.values
    key = (v.tobytes(), k)
    if k == 2:
        return _cached(key, lambda: _pairs_zero_sum(v))
    if k == 6:
        J = len(v)
        candidates = factorial(J + 4) // (factorial(5) * factorial(J - 1)) if J else 0
        if candidates > budget:
            raise BudgetError(
                f"6-linear enumeration over {J} modes needs {candidates:.3g} "
                f"candidate scans (budget {budget:.3g}); raise the active-mode floor"
            )
        return _cached(key, lambda: kernels.zero_sum_multisets_6(v))
    if k == 10:
        return _cached(key, lambda: _tuples_zero_sum_10(v))
    raise ConfigError(f"k must be one of 2, 6, 10, got {k}")


# ---------------------------------------------------------------------------
# Symbol factories: callables on integer index arrays (T, k) -> complex (T,).
# ---------------------------------------------------------------------------

def make_symbol(name: str, grid: Grid, p: IParams | None = None,
                th: Thresholds | None = None):
    """Vectorized multiplier by name, evaluated on integer tuple arrays."""
    scale = grid.scale

    def need_p():
        if p is None:
            raise ConfigError(f"symbol {name!r} needs multiplier parameters")
        return p

    def need_th():
        if th is None:
            raise ConfigError(f"symbol {name!r} needs thresholds")
        return th

    if name == "one":
        return lambda idx: np.ones(len(idx), dtype=np.float64)
    if name == "alpha":
        return lambda idx: 1j * np.sum((idx * scale) ** 3, axis=1)
    if name == "sigma2":
        pp = need_p()

        def sigma2_fn(idx):
            xi = idx * scale
            m = kernels.m_batch(xi, pp.N, pp.s)
            return -0.5 * m[:, 0] * m[:, 1] * xi[:, 0] * xi[:, 1]

        return sigma2_fn
    if name == "sigma6":
        pp = need_p()

        def sigma6_fn(idx):
            xi = idx * scale
            m = kernels.m_batch(xi, pp.N, pp.s)
            return -np.prod(m, axis=1) / 6.0

        return sigma6_fn
    if name in ("m6_1", "m6_2", "m6_sym"):
        pp = need_p()

        def m6_fn(idx):
            m61, m62 = kernels.m6_parts_batch(idx, scale, pp.N, pp.s)
            if name == "m6_1":
                return 1j * m61
            if name == "m6_2":
                return 1j * m62
            return 1j * (m61 + m62)

        return m6_fn
    if name == "sigma_tilde6":
        pp, tt = need_p(), need_th()

        def tilde_fn(idx):
            vals, _ = kernels.sigma_tilde6_batch(idx, scale, pp.N, pp.s,
                                                 *tt.kernel_args())
            return vals

        return tilde_fn
    if name in ("m6_bar", "m6_tilde"):
        pp, tt = need_p(), need_th()

        def split_fn(idx):
            m61, m62 = kernels.m6_parts_batch(idx, scale, pp.N, pp.s)
            _, flags = kernels.sigma_tilde6_batch(idx, scale, pp.N, pp.s,
                                                  *tt.kernel_args())
            chi = ((flags & 7) != 0) & ((flags & 8) == 0)
            if name == "m6_bar":
                return 1j * np.where(chi, 0.0, m61)
            return 1j * (np.where(chi, m61, 0.0) + m62)

        return split_fn
    if name in ("m10_sym", "m10_bar"):
        pp = need_p()
        tt = th if th is not None else Thresholds()

        def m10_fn(idx):
            im = kernels.m10_block_batch(idx, scale, pp.N, pp.s,
                                         *tt.kernel_args(),
                                         with_sigma_tilde=(name == "m10_bar"))
            return 1j * im

        return m10_fn
    raise ConfigError(f"unknown symbol {name!r}")


# ---------------------------------------------------------------------------
# The k-linear quadrature.
# ---------------------------------------------------------------------------

def lambda_k_complex(M, s: Spectrum, modes: ActiveModeSet, k: int,
                     budget: int = DEFAULT_LAMBDA6_BUDGET) -> complex:
    if s.hermitian_defect() > 1e-8:
        raise ConfigError("spectrum is not Hermitian (non-real field)")
    pos, w = zero_sum_tuples(modes, k, budget)
    if len(pos) == 0:
        return 0.0 + 0.0j
    idx = modes.values[pos]
    mv = np.asarray(M(idx))
    coeffs = s.coeff_at(idx)
    prods = np.prod(coeffs, axis=1)
    total = np.sum(w * mv * prods)
    return complex(total) * float(s.grid.L) ** (1 - k)


def lambda_k(M, s: Spectrum, modes: ActiveModeSet, k: int,
             budget: int = DEFAULT_LAMBDA6_BUDGET) -> float:
    """Real-valued k-linear quadrature; raises if the imaginary residue is large."""
    val = lambda_k_complex(M, s, modes, k, budget)
    scale = abs(val) + 1.0
    if abs(val.imag) > REAL_RESIDUE_TOL * scale:
        raise RealityError(
            f"Lambda_{k} carried imaginary residue {val.imag:.3e} (|value| {abs(val):.3e})"
        )
    return val.real


# ---------------------------------------------------------------------------
# Exact Lebesgue quadrature for band-limited powers.
# ---------------------------------------------------------------------------

def _active_width(s: Spectrum, rel: float = 1e-16) -> int:
    mags = np.abs(s.coeffs)
    top = float(np.max(mags))
    if top == 0.0:
        return 0
    keep = mags > rel * top
    keep[s.grid.nyquist_index()] = False
    if not np.any(keep):
        return 0
    return int(np.max(np.abs(s.grid.freq_index[keep])))


def lp_integral(s: Spectrum, power: int) -> float:
    """Exact ``int u^power dx`` for a band-limited real field (padded grid sum)."""
    g = s.grid
    width = _active_width(s)
    n_pad = g.n
    while n_pad < power * width + 2:
        n_pad *= 2
    if n_pad == g.n:
        u = inverse_transform(s, tol=1e-6).values
        return float(np.sum(u**power) * g.dx)
    pad = np.zeros(n_pad, dtype=np.complex128)
    half = g.n // 2
    pad[:half] = s.coeffs[:half]
    pad[n_pad - half + 1:] = s.coeffs[half + 1:]
    phase = np.where(fft_index(n_pad) % 2 == 0, 1.0, -1.0)
    dx_pad = g.L / n_pad
    u = np.real(np.fft.ifft(pad * phase)) / dx_pad
    return float(np.sum(u**power) * dx_pad)


def mass(f: Field) -> float:
    return float(np.sum(f.values**2) * f.grid.dx)


def mass_spectrum(s: Spectrum) -> float:
    return float(np.sum(np.abs(s.coeffs) ** 2) / s.grid.L)


def energy(f: Field, mu: int = -1) -> float:
    """Plain energy: grid quadrature of ``u_x^2/2 + mu u^6/6``."""
    ux = derivative(f).values
    return float(np.sum(0.5 * ux**2 + (mu / 6.0) * f.values**6) * f.grid.dx)


def e1_modified(f: Field | Spectrum, p: IParams, mu: int = -1) -> float:
    """Energy of the smoothed field, with the sextic part alias-free."""
    s = f if isinstance(f, Spectrum) else forward_transform(f)
    g = s.grid
    iu = Spectrum(g, s.coeffs * m_table(g, p))
    kinetic = 0.5 * float(np.sum(g.xi**2 * np.abs(iu.coeffs) ** 2) / g.L)
    return kinetic + (mu / 6.0) * lp_integral(iu, 6)


def omega_correction(s: Spectrum, modes: ActiveModeSet, p: IParams, th: Thresholds,
                     budget: int = DEFAULT_LAMBDA6_BUDGET):
    """Indicator-supported part of the corrected-symbol quadrature.

    Returns ``(Lambda_6(sigma_tilde6 + sigma6), guarded fraction, tuple count)``;
    the symbol vanishes off the non-resonant sets so only flagged tuples sum.
    """
    pos, w = zero_sum_tuples(modes, 6, budget)
    if len(pos) == 0:
        return 0.0, 0.0, 0
    idx = modes.values[pos]
    g = s.grid
    vals, flags = kernels.sigma_tilde6_batch(idx, g.scale, p.N, p.s, *th.kernel_args())
    chi = ((flags & 7) != 0) & ((flags & 8) == 0)
    guard_frac = float(np.mean((flags & 8) != 0))
    if not np.any(chi):
        return 0.0, guard_frac, len(pos)
    xi = idx[chi] * g.scale
    m = kernels.m_batch(xi, p.N, p.s)
    corr = vals[chi] + (-np.prod(m, axis=1) / 6.0)  # sigma_tilde + sigma6
    prods = np.prod(s.coeff_at(idx[chi]), axis=1)
    total = np.sum(w[chi] * corr * prods) * float(g.L) ** (-5)
    scale_ref = abs(total) + 1.0
    if abs(total.imag) > REAL_RESIDUE_TOL * scale_ref:
        raise RealityError(f"omega correction residue {total.imag:.3e}")
    return float(total.real), guard_frac, len(pos)


def lambda6_sigma_tilde(s: Spectrum, modes: ActiveModeSet, p: IParams,
                        th: Thresholds, budget: int = DEFAULT_LAMBDA6_BUDGET) -> float:
    """``Lambda_6(sigma_tilde6)`` in the well-conditioned split form."""
    iu = Spectrum(s.grid, s.coeffs * m_table(s.grid, p))
    corr, _, _ = omega_correction(s, modes, p, th, budget)
    return lp_integral(iu, 6) / 6.0 + corr


def e2_modified(f: Field | Spectrum, p: IParams, th: Thresholds, mu: int = -1,
                modes: ActiveModeSet | None = None, floor: float = DEFAULT_FLOOR,
                budget: int = DEFAULT_LAMBDA6_BUDGET) -> float:
    """Corrected modified energy ``e1 + (-mu) * Lambda_6(sigma_tilde6)``.

    The correction enters with the sign that makes its derivative cancel
    the non-resonant part of the sextic symbol for either nonlinearity sign
    (for the focusing convention ``mu=-1`` this is the plain sum).
    """
    s = f if isinstance(f, Spectrum) else forward_transform(f)
    if modes is None:
        modes = ActiveModeSet.from_spectrum(s, floor)
    return e1_modified(s, p, mu) + (-mu) * lambda6_sigma_tilde(s, modes, p, th, budget)


@dataclass(frozen=True)
class EnergyLedger:
    """One evaluation of every tracked functional at a fixed time."""

    t: float
    mass: float
    energy: float
    e1: float
    lambda6_sigma_tilde: float
    e2: float
    h1_of_Iu: float
    guard_frac: float = 0.0

    def __post_init__(self):
        vals = (self.mass, self.energy, self.e1, self.lambda6_sigma_tilde,
                self.e2, self.h1_of_Iu)
        if not all(np.isfinite(v) for v in vals):
            raise ConfigError("ledger contains non-finite entries")
        if abs(self.e2 - (self.e1 + self.lambda6_sigma_tilde)) > 1e-9 * (1 + abs(self.e2)):
            raise ConfigError("ledger identity e2 = e1 + correction violated")

    @classmethod
    def compute(cls, s: Spectrum, p: IParams, th: Thresholds, t: float = 0.0,
                mu: int = -1, modes: ActiveModeSet | None = None,
                floor: float = DEFAULT_FLOOR,
                budget: int = DEFAULT_LAMBDA6_BUDGET) -> "EnergyLedger":
        if modes is None:
            modes = ActiveModeSet.from_spectrum(s, floor)
        g = s.grid
        f = inverse_transform(s, tol=1e-6)
        iu = Spectrum(g, s.coeffs * m_table(g, p))
        e1 = e1_modified(s, p, mu)
        corr_omega, guard_frac, _ = omega_correction(s, modes, p, th, budget)
        lam6 = lp_integral(iu, 6) / 6.0 + corr_omega
        signed = (-mu) * lam6
        return cls(
            t=t,
            mass=mass(f),
            energy=energy(f, mu),
            e1=e1,
            lambda6_sigma_tilde=signed,
            e2=e1 + signed,
            h1_of_Iu=sobolev_norm_spectrum(iu, 1.0),
            guard_frac=guard_frac,
        )


# ---------------------------------------------------------------------------
# Differentiation-formula right-hand sides.
# ---------------------------------------------------------------------------

def _conv5(s: Spectrum, modes: ActiveModeSet):
    """Ordered 5-fold self-convolution of the active coefficients.

    Returns ``(table, offset)`` with ``table[t - offset] = sum over ordered
    5-tuples of active modes with index sum t of the coefficient product``.
    """
    v = modes.values
    lo, hi = int(v[0]), int(v[-1])
    span = hi - lo + 1
    base = np.zeros(span, dtype=np.complex128)
    base[v - lo] = s.coeff_at(v)
    c2 = np.convolve(base, base)
    c4 = np.convolve(c2, c2)
    c5 = np.convolve(c4, base)
    return c5, 5 * lo


def _lambda_ext_prefix(M, s: Spectrum, modes: ActiveModeSet, k: int,
                       budget: int) -> complex:
    """``Lambda_{k+4}`` of the slot-extended multiplier
    ``M(xi_1..xi_{k-1}, S) * S`` with ``S`` the sum of the trailing five."""
    g = s.grid
    v = modes.values
    if len(v) == 0:
        return 0.0 + 0.0j
    c5, off = _conv5(s, modes)

    if k == 2:
        pref_idx = v[:, None]
        w = np.ones(len(v))
        prods = s.coeff_at(v)
    elif k == 6:
        J = len(v)
        candidates = factorial(J + 4) // (factorial(5) * factorial(J - 1))
        if candidates > budget:
            raise BudgetError(
                f"10-linear extension over {J} modes exceeds budget; "
                "raise the active-mode floor"
            )
        pos, w = _cached((v.tobytes(), "prefix5"),
                         lambda: kernels.prefix_multisets_5(v))
        pref_idx = v[pos]
        prods = np.prod(s.coeff_at(pref_idx), axis=1)
    else:
        raise ConfigError("slot extension implemented for k in {2, 6}")

    ssum = -np.sum(pref_idx, axis=1)
    # The extended slot pairs with a coefficient of the evolved field, which
    # the de-aliased flow keeps inside the resolved band.
    inside = (ssum - off >= 0) & (ssum - off < len(c5)) & (np.abs(ssum) < g.n // 2)
    conv = np.zeros(len(ssum), dtype=np.complex128)
    conv[inside] = c5[ssum[inside] - off]

    full_idx = np.concatenate([pref_idx, ssum[:, None]], axis=1)
    mv = np.asarray(M(full_idx))
    vals = mv * (ssum * g.scale)
    total = np.sum(w * vals * prods * conv)
    return complex(total) * float(g.L) ** (-(k + 3))


def dlambda_rhs(M, s: Spectrum, modes: ActiveModeSet, k: int, mu: int = -1,
                budget: int = DEFAULT_LAMBDA6_BUDGET) -> float:
    """Time derivative of ``Lambda_k(M)`` along the flow, by the symbol calculus:
    ``Lambda_k(M alpha_k) + i mu k Lambda_{k+4}(M(xi_1..xi_{k-1}, S) S)``."""
    g = s.grid

    def m_alpha(idx):
        return np.asarray(M(idx)) * (1j * np.sum((idx * g.scale) ** 3, axis=1))

    local = lambda_k_complex(m_alpha, s, modes, k, budget)
    ext = _lambda_ext_prefix(M, s, modes, k, budget)
    total = local + 1j * mu * k * ext
    scale_ref = abs(total) + 1.0
    if abs(total.imag) > 1e-8 * scale_ref:
        raise RealityError(f"dLambda residue {total.imag:.3e}")
    return total.real


def de1_rhs(s: Spectrum, modes: ActiveModeSet, p: IParams, mu: int = -1,
            budget: int = DEFAULT_LAMBDA6_BUDGET) -> float:
    """RHS of the first modified energy's derivative (both symbol terms)."""
    g = s.grid
    sig2 = make_symbol("sigma2", g, p)
    sig6 = make_symbol("sigma6", g, p)

    def sigma6_mu(idx):
        return -mu * np.asarray(sig6(idx))

    return (dlambda_rhs(sig2, s, modes, 2, mu, budget)
            + dlambda_rhs(sigma6_mu, s, modes, 6, mu, budget))


def de2_rhs(s: Spectrum, modes: ActiveModeSet, p: IParams, th: Thresholds,
            mu: int = -1, budget: int = DEFAULT_LAMBDA6_BUDGET) -> float:
    """RHS of the corrected energy's derivative."""
    g = s.grid
    tilde = make_symbol("sigma_tilde6", g, p, th)

    def tilde_mu(idx):
        return -mu * np.asarray(tilde(idx))

    return de1_rhs(s, modes, p, mu, budget) + dlambda_rhs(tilde_mu, s, modes, 6, mu, budget)


# ---------------------------------------------------------------------------
# Space-time diagnostic norm.
# ---------------------------------------------------------------------------

def xsb_norm(times: np.ndarray, spectra: np.ndarray, grid: Grid, s: float,
             b: float) -> float:
    """Discrete dispersive space-time norm of a tapered history (diagnostic).

    ``spectra`` holds FFT-order spatial coefficients, one row per sample of
    the uniformly-sampled ``times``.  A half-cosine taper mimics the
    restriction-norm infimum; weights are ``<xi>^2s <tau - xi^3>^2b``.
    """
    times = np.asarray(times, dtype=np.float64)
    if len(times) < 16:
        raise ConfigError("space-time norm needs at least 16 time samples")
    dt = np.diff(times)
    if np.max(np.abs(dt - dt[0])) > 1e-9 * abs(dt[0]):
        raise ConfigError("history must be uniformly sampled in time")
    m_t = len(times)
    span = m_t * dt[0]
    taper = np.sin(np.pi * (times - times[0]) / (times[-1] - times[0]))
    tapered = spectra * taper[:, None]
    st = np.fft.fft(tapered, axis=0) * dt[0]
    tau = 2.0 * np.pi * (np.fft.fftfreq(m_t) * m_t) / span
    xi = grid.xi
    w_x = (1.0 + xi**2) ** s
    w_t = (1.0 + (tau[:, None] - xi[None, :] ** 3) ** 2) ** b
    total = np.sum(w_t * w_x[None, :] * np.abs(st) ** 2) / (grid.L * span)
    return float(np.sqrt(total))
