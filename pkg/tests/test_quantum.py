import warnings

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy import special

from dipolar_rotors.config import COUPLING, Arrangement, ConfigError, RotorPairConfig
from dipolar_rotors.io import read_matrix_csv, write_state_csv
from dipolar_rotors.observables import orientation_factor, theta_density
from dipolar_rotors.quantum import (
    QuantumState,
    SpectralEvolution,
    TruncationError,
    TruncationWarning,
    apply_kick_bessel,
    apply_kick_grid,
    bessel_tail_mass,
    build_bases,
    expand,
    forbidden_population,
    grid_angles,
    ground_state,
    kick_and_expand,
    mean_energy,
    parity_mask,
    propagate,
    uniform_state,
)
from oracles import bessel_tail_direct


def random_physical_state(rng, n=128, band=6):
    """Random band-limited state built from theta-plane waves (so translation-even)."""
    th = grid_angles(n)
    xi, eta = np.meshgrid(th, th, indexing="ij")
    t1, t2 = xi + eta, xi - eta
    psi = np.zeros((n, n), dtype=complex)
    for m1 in range(-band, band + 1):
        for m2 in range(-band, band + 1):
            c = rng.normal() + 1j * rng.normal()
            psi += c * np.exp(1j * (m1 * t1 + m2 * t2))
    psi /= np.sqrt(np.sum(np.abs(psi) ** 2) * (2 * np.pi / n) ** 2)
    return QuantumState(amplitudes=psi)


def test_coupling_constants():
    assert COUPLING[Arrangement.A] == (1.5, 0.5, 0.0, np.pi / 2)
    assert COUPLING[Arrangement.B] == (0.0, 1.0, 0.0, 0.0)


def test_separated_potential_matches_dipolar_form():
    th = np.linspace(-np.pi, np.pi, 9)
    t1, t2 = np.meshgrid(th, th)
    xi, eta = (t1 + t2) / 2, (t1 - t2) / 2
    for arr, F in [
        ("A", np.cos(t1) * np.cos(t2) - 2 * np.sin(t1) * np.sin(t2)),
        ("B", np.cos(t1 - t2)),
    ]:
        c = COUPLING[Arrangement(arr)]
        sep = c.c_xi * np.cos(2 * (xi + c.xi0)) + c.c_eta * np.cos(2 * (eta + c.eta0))
        np.testing.assert_allclose(sep, F, atol=1e-14)


@pytest.mark.parametrize(
    "kw,key",
    [
        (dict(gamma=-1.0), "gamma"),
        (dict(kick_strength=-2.0), "kick_strength"),
        (dict(grid_size=200), "grid_size"),
        (dict(grid_size=64), "grid_size"),
        (dict(levels=200), "levels"),
        (dict(bessel_cutoff=10), "bessel_cutoff"),
        (dict(K=4), "K"),
    ],
)
def test_config_validation(kw, key):
    with pytest.raises(ConfigError) as err:
        RotorPairConfig(**kw)
    assert err.value.key == key


def test_default_bessel_cutoff():
    assert RotorPairConfig(kick_strength=10.0).n_c == 40
    assert RotorPairConfig(kick_strength=2.3).n_c == 25


@pytest.mark.parametrize("arr", ["A", "B"])
def test_free_ground_state_is_constant(arr):
    gs = ground_state(RotorPairConfig(arr, 0.0))
    amp = gs.grid(128)
    np.testing.assert_allclose(np.abs(amp), 1 / (2 * np.pi), atol=1e-13)
    assert gs.norm() == pytest.approx(1.0, abs=1e-14)


def test_ground_state_strong_coupling_two_lobes(cfg_a30):
    rho = theta_density(ground_state(cfg_a30), 128)
    th = grid_angles(128)
    i0, ih, imh = 64, 96, 32  # theta = 0, pi/2, -pi/2
    assert th[ih] == pytest.approx(np.pi / 2)
    assert rho[ih, ih] == pytest.approx(rho.max(), rel=1e-3)
    assert rho[imh, imh] == pytest.approx(rho[ih, ih], rel=1e-10)
    assert rho[i0, i0] < 1e-6 * rho.max()


def test_ground_state_localization_grows_with_coupling():
    peaks = [theta_density(ground_state(RotorPairConfig("A", g)), 128).max() for g in (0.0, 1.0, 3.0, 30.0)]
    assert peaks[0] == pytest.approx(1 / (4 * np.pi**2), rel=1e-10)
    assert all(b > a for a, b in zip(peaks, peaks[1:]))


def test_ground_state_is_translation_even(cfg_a30):
    assert ground_state(cfg_a30).translation_defect() < 1e-10


def test_kick_identity_and_norm(rng):
    s = random_physical_state(rng)
    np.testing.assert_array_equal(apply_kick_grid(s, 0.0).amplitudes, s.amplitudes)
    for P in (1.0, 10.0, 37.5):
        k = apply_kick_grid(s, P)
        assert k.norm() == pytest.approx(s.norm(), abs=1e-12)
        assert k.translation_defect() < 1e-10


def test_kick_matches_theta_phase(rng):
    s = random_physical_state(rng, n=64, band=3)
    th = grid_angles(64)
    xi, eta = np.meshgrid(th, th, indexing="ij")
    expect = s.amplitudes * np.exp(1j * 3.0 * (np.cos(xi + eta) + np.cos(xi - eta)))
    np.testing.assert_allclose(apply_kick_grid(s, 3.0).amplitudes, expect, atol=1e-13)


def test_bessel_kick_identity_at_zero(rng):
    s = random_physical_state(rng)
    np.testing.assert_allclose(apply_kick_bessel(s, 0.0, 1).amplitudes, s.amplitudes, atol=1e-15)


@pytest.mark.parametrize("P", [1.0, 5.0, 10.0])
def test_bessel_kick_matches_grid(rng, P):
    s = random_physical_state(rng)
    n_c = int(2 * P) + 20
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        a = apply_kick_bessel(s, P, n_c).amplitudes
    b = apply_kick_grid(s, P).amplitudes
    assert np.max(np.abs(a - b)) < 1e-8


def test_bessel_tail_warning():
    assert bessel_tail_mass(20.0, 5) == pytest.approx(bessel_tail_direct(20.0, 5), rel=1e-12)
    assert bessel_tail_mass(20.0, 5) > 1e-12
    with pytest.warns(TruncationWarning):
        apply_kick_bessel(uniform_state(128), 10.0, 5)


def test_expand_free_ground(cfg_free):
    bases = build_bases(cfg_free)
    D = expand(QuantumState(amplitudes=np.full((256, 256), 1 / (2 * np.pi), dtype=complex)), bases)
    assert abs(D[0, 0]) == pytest.approx(1.0, abs=1e-13)
    D[0, 0] = 0
    assert np.max(np.abs(D)) < 1e-13


def test_expand_kicked_captures_norm(cfg_free):
    bases = build_bases(cfg_free)
    kicked = apply_kick_grid(ground_state(cfg_free), 10.0, 512)
    D = expand(kicked, bases)
    assert np.sum(np.abs(D) ** 2) == pytest.approx(1.0, abs=1e-8)


def test_expand_reports_truncation():
    small = RotorPairConfig("A", 0.0, 10.0, K=16, levels=16)
    kicked = apply_kick_grid(ground_state(RotorPairConfig("A", 0.0)), 10.0, 256)
    with pytest.raises(TruncationError):
        expand(kicked, build_bases(small))


def test_grid_coefficient_roundtrip(rng, cfg_a30):
    bases = build_bases(cfg_a30)
    s = random_physical_state(rng, n=256)
    D = expand(s, bases)
    back = QuantumState(coeffs=D, bases=bases, grid_size=256).grid(256)
    assert np.max(np.abs(back - s.amplitudes)) < 1e-9


def test_parity_selection(rng, cfg_a30):
    bases = build_bases(cfg_a30)
    D = expand(random_physical_state(rng, n=256), bases)
    assert np.max(np.abs(D[~parity_mask(bases)])) < 1e-12


@pytest.mark.parametrize("arr,gamma", [("A", 0.0), ("A", 30.0), ("B", 30.0)])
def test_kick_never_populates_forbidden(arr, gamma):
    cfg = RotorPairConfig(arr, gamma)
    bases = build_bases(cfg)
    D = kick_and_expand(ground_state(cfg), 10.0, bases)
    assert forbidden_population(D, bases) < 1e-24


def test_propagate_identity_at_zero(cfg_a30):
    bases = build_bases(cfg_a30)
    D = kick_and_expand(ground_state(cfg_a30), 10.0, bases)
    np.testing.assert_array_equal(propagate(D, bases, 0.0).coeffs, D)
    with pytest.raises(ValueError):
        propagate(D, bases, -1.0)


def test_free_propagation_phases(cfg_free):
    """On theta plane waves e^{i(m1 th1 + m2 th2)} free evolution multiplies by e^{-i(m1^2+m2^2)t}."""
    bases = build_bases(cfg_free)
    n = 256
    th = grid_angles(n)
    xi, eta = np.meshgrid(th, th, indexing="ij")
    m1, m2, t = 3, -2, 0.37
    psi0 = np.exp(1j * (m1 * (xi + eta) + m2 * (xi - eta))) / (2 * np.pi)
    D = expand(QuantumState(amplitudes=psi0), bases)
    out = propagate(D, bases, t).grid(n)
    np.testing.assert_allclose(out, psi0 * np.exp(-1j * (m1**2 + m2**2) * t), atol=1e-12)


def test_unitarity_and_energy_conservation(cfg_a30):
    bases = build_bases(cfg_a30)
    D = kick_and_expand(ground_state(cfg_a30), 10.0, bases)
    e0 = mean_energy(D, bases)
    for t in np.linspace(0, 7, 29):
        Dt = propagate(D, bases, t).coeffs
        assert abs(np.sum(np.abs(Dt) ** 2) - 1) < 1e-10
        assert abs(mean_energy(Dt, bases) - e0) < 1e-10 * abs(e0)


def test_grid_synthesis_preserves_norm_and_parity(cfg_a30):
    evo = SpectralEvolution(kick_and_expand(ground_state(cfg_a30), 10.0, build_bases(cfg_a30)), build_bases(cfg_a30))
    s = evo.state(0.091, 512).with_grid(512)
    assert s.norm() == pytest.approx(1.0, abs=1e-10)
    assert s.translation_defect() < 1e-10


def test_spectral_orientation_matches_grid_quadrature(cfg_a30):
    bases = build_bases(cfg_a30)
    evo = SpectralEvolution(kick_and_expand(ground_state(cfg_a30), 10.0, bases), bases)
    for t in (0.0, 0.05, 0.091, 1.3):
        grid_val = orientation_factor(evo.state(t).with_grid(512))
        assert evo.orientation(t) == pytest.approx(grid_val, abs=1e-10)


def test_isolated_trace_at_focal_time(cfg_free):
    bases = build_bases(cfg_free)
    evo = SpectralEvolution(kick_and_expand(ground_state(cfg_free), 10.0, bases), bases)
    o = orientation_factor(evo.state(0.092).with_grid(512))
    assert o == pytest.approx(2 - 2 * special.j1(20 * np.sin(0.092)), abs=1e-10)
    assert o == pytest.approx(0.836, abs=1e-3)


@settings(max_examples=10, deadline=None)
@given(t=st.floats(0.0, 7.0))
def test_free_trace_revival(t):
    cfg = RotorPairConfig("A", 0.0, 10.0)
    bases = build_bases(cfg)
    evo = SpectralEvolution(kick_and_expand(ground_state(cfg), 10.0, bases), bases)
    assert evo.orientation(t) == pytest.approx(evo.orientation(t + 2 * np.pi), abs=1e-9)


def test_fourier_resample_exact(rng):
    s = random_physical_state(rng, n=64, band=4)
    up = s.grid(256)
    th = grid_angles(256)
    assert QuantumState(amplitudes=up).norm() == pytest.approx(1.0, abs=1e-12)
    np.testing.assert_allclose(up[::4, ::4], s.amplitudes, atol=1e-12)
    del th


def test_state_snapshot_csv(tmp_path, cfg_a30):
    gs = ground_state(cfg_a30)
    path = write_state_csv(tmp_path / "state.csv", gs, {**cfg_a30.echo(), "time": 0.0}, n=128)
    header, mat = read_matrix_csv(path)
    assert header["gamma"] == "30.0" and header["time"] == "0.0"
    np.testing.assert_allclose(mat, np.abs(gs.grid(128)) ** 2, rtol=1e-15)


def test_state_requires_one_representation():
    with pytest.raises(ValueError):
        QuantumState()
