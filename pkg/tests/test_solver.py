"""Integrator accuracy, conservation, dealiasing, and reversal symmetry."""

import numpy as np
import pytest

from gkdvlab.errors import BlowUpError, ConfigError
from gkdvlab.grids import Grid, Field, Spectrum, derivative, forward_transform, inverse_transform
from gkdvlab.solver import (
    History,
    SolverConfig,
    conservation_check,
    evolve,
    ground_state,
    soliton,
    step,
)

G = Grid(1024, 64.0)


def test_config_validation():
    with pytest.raises(ConfigError):
        SolverConfig(dt=0.0, t_end=1.0)
    with pytest.raises(ConfigError):
        SolverConfig(dt=1e-3, t_end=1.0, dealias_factor=2)
    with pytest.raises(ConfigError):
        SolverConfig(dt=1e-3, t_end=1.0, mu=0)


def test_ground_state_values():
    q = ground_state(G)
    assert q.values[G.n // 2] == pytest.approx(3.0**0.25, abs=1e-12)
    qxx = derivative(q, 2).values
    resid = np.max(np.abs(qxx + q.values**5 - q.values))
    assert resid < 1e-8


def test_ground_state_box_guard():
    with pytest.raises(ConfigError):
        ground_state(Grid(64, 16.0))


def test_zero_field_stays_zero():
    cfg = SolverConfig(dt=1e-3, t_end=0.01)
    out = step(Field(G, np.zeros(G.n)), cfg)
    assert np.all(out.values == 0.0)


def test_soliton_transport_short():
    cfg = SolverConfig(dt=2.5e-4, t_end=0.1, mu=-1)
    hist = evolve(ground_state(G), cfg)
    err = hist.field(len(hist) - 1).values - soliton(G, 0.1).values
    assert np.sqrt(np.sum(err**2) * G.dx) < 1e-7


def test_free_evolution_mass_exact():
    # Tiny amplitude: the nonlinearity is negligible and the linear phase
    # is applied exactly, so mass is conserved to rounding.
    g = Grid(256, 32.0)
    rng = np.random.default_rng(0)
    u = 1e-9 * rng.standard_normal(g.n)
    cfg = SolverConfig(dt=1e-3, t_end=0.1)
    hist = evolve(Field(g, u), cfg)
    rep = conservation_check(hist)
    assert rep["mass_drift_rel"] < 1e-12


def test_defocusing_random_conservation():
    g = Grid(512, 32.0)
    rng = np.random.default_rng(1)
    coeffs = np.zeros(g.n, dtype=np.complex128)
    for j in range(1, 30):
        c = (rng.standard_normal() + 1j * rng.standard_normal()) * np.exp(-j / 8.0)
        coeffs[j] = c
        coeffs[-j] = np.conj(c)
    f = inverse_transform(Spectrum(g, coeffs))
    cfg = SolverConfig(dt=5e-4, t_end=0.5, mu=1)
    hist = evolve(f, cfg, [0.0, 0.25, 0.5])
    rep = conservation_check(hist)
    assert rep["mass_drift_rel"] < 1e-7
    assert rep["energy_drift_rel"] < 1e-7


def test_realness_preserved():
    cfg = SolverConfig(dt=1e-3, t_end=0.05, mu=-1)
    hist = evolve(ground_state(G), cfg)
    s = hist.spectrum(len(hist) - 1)
    assert s.hermitian_defect() < 1e-12


def test_dealias_factor_three_suffices():
    # A field whose quintic power aliases on the base grid evolves
    # identically under padding factors 3 and 4.
    g = Grid(256, 16.0)
    rng = np.random.default_rng(2)
    coeffs = np.zeros(g.n, dtype=np.complex128)
    for j in range(20, 60):
        c = (rng.standard_normal() + 1j * rng.standard_normal()) * 0.05
        coeffs[j] = c
        coeffs[-j] = np.conj(c)
    f = inverse_transform(Spectrum(g, coeffs))
    out3 = evolve(f, SolverConfig(dt=1e-4, t_end=0.01, dealias_factor=3))
    out4 = evolve(f, SolverConfig(dt=1e-4, t_end=0.01, dealias_factor=4))
    diff = out3.field(len(out3) - 1).values - out4.field(len(out4) - 1).values
    assert np.max(np.abs(diff)) < 1e-10


def test_time_reversal_symmetry():
    # u(x,t) -> u(-x, -t) solves the same equation: march forward, flip,
    # march forward again, flip back; recovers the data within 10x the
    # forward error.
    g = Grid(512, 64.0)
    q = ground_state(g)
    T = 0.05
    cfg = SolverConfig(dt=5e-4, t_end=T, mu=-1)
    fwd = evolve(q, cfg)
    flipped = Field(g, fwd.field(len(fwd) - 1).values[::-1].copy())
    back = evolve(flipped, cfg)
    recovered = Field(g, back.field(len(back) - 1).values[::-1].copy())
    err_cycle = np.sqrt(np.sum((recovered.values - q.values) ** 2) * g.dx)
    err_fwd = np.sqrt(np.sum(
        (fwd.field(len(fwd) - 1).values - soliton(g, T).values) ** 2) * g.dx)
    assert err_cycle < 10 * max(err_fwd, 1e-12)


def test_temporal_order_richardson():
    g = Grid(512, 64.0)
    q = ground_state(g)
    T = 0.128

    def final(dt):
        hist = evolve(q, SolverConfig(dt=dt, t_end=T, mu=-1), [0.0, T])
        return hist.field(len(hist) - 1).values

    ref = final(1e-4)
    e1 = np.sqrt(np.sum((final(3.2e-3) - ref) ** 2) * g.dx)
    e2 = np.sqrt(np.sum((final(1.6e-3) - ref) ** 2) * g.dx)
    assert 12.0 < e1 / e2 < 20.0


def test_blowup_detector():
    g = Grid(256, 32.0)
    f = Field(g, 5.0 * (3.0 * np.cosh(2.0 * g.x) ** -2.0) ** 0.25)
    cfg = SolverConfig(dt=1e-4, t_end=1.0, mu=-1, blowup_cap=20.0)
    with pytest.raises(BlowUpError):
        evolve(f, cfg)


def test_sample_times_must_align():
    cfg = SolverConfig(dt=1e-3, t_end=0.01)
    with pytest.raises(ConfigError):
        evolve(ground_state(G), cfg, [0.0, 0.0015])
