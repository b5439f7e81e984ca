"""Spectrum, basis transforms, evolution, interpolation and the quadrature
identities, each checked against an independent route where one exists."""

import numpy as np
import pytest

from qorbit.config import Config
from qorbit.dynamics import decompose_orbits, from_particle_shift, from_permutation
from qorbit.errors import (
    BandwidthMismatchError,
    LengthMismatchError,
    OrbitMismatchError,
    TooLargeError,
    WrongBasisError,
)
from qorbit.kernel import periodic_sinc
from qorbit.spectral import (
    CONFIGURATION,
    ENERGY,
    BandlimitedFunction,
    QuantumState,
    bandlimited_product_sum,
    closure_defect,
    config_basis_state,
    dft_direct,
    dirac_defect,
    energy_spectrum,
    evolve,
    fidelity,
    inner_product,
    interpolate_config,
    random_bandlimited,
    reconstruct,
    state_from_jsonable,
    state_to_jsonable,
    to_config_basis,
    to_energy_basis,
    unit_step,
)


def shift_orbit(n, tau=1.0):
    return decompose_orbits(from_particle_shift(n), Config(tau=tau)).orbits[0]


def test_spectrum_levels():
    spec = energy_spectrum(shift_orbit(4))
    np.testing.assert_allclose(spec.energies, [0.0, 0.25, 0.5, 0.75], atol=1e-15)
    assert energy_spectrum(shift_orbit(1)).energies.tolist() == [0.0]


def test_spectrum_zero_point():
    spec = energy_spectrum(shift_orbit(2), zero_point=True)
    np.testing.assert_allclose(spec.energies, [0.25, 0.75], atol=1e-15)


def test_spectrum_scales_with_tau_and_h():
    spec = energy_spectrum(shift_orbit(5, tau=2.0), Config(tau=2.0, h=3.0))
    # spacing h/T with T = 10
    np.testing.assert_allclose(np.diff(spec.energies), 0.3, atol=1e-15)


def test_config_basis_state_both_bases():
    orbit = shift_orbit(3)
    state = config_basis_state(orbit, 0)
    np.testing.assert_allclose(state.amplitudes, [1, 0, 0], atol=0)
    energy = to_energy_basis(state)
    np.testing.assert_allclose(energy.amplitudes, np.full(3, 1 / np.sqrt(3)),
                               atol=1e-15)
    with pytest.raises(IndexError):
        config_basis_state(orbit, 3)


def test_basis_round_trip():
    rng = np.random.default_rng(42)
    for n in (1, 2, 7, 64):
        amp = rng.standard_normal(n) + 1j * rng.standard_normal(n)
        amp /= np.linalg.norm(amp)
        state = QuantumState(amp, CONFIGURATION)
        back = to_config_basis(to_energy_basis(state))
        np.testing.assert_allclose(back.amplitudes, amp, atol=1e-11)


def test_wrong_basis_raises():
    state = config_basis_state(shift_orbit(2), 0)
    with pytest.raises(WrongBasisError):
        to_config_basis(state)
    with pytest.raises(WrongBasisError):
        to_energy_basis(to_energy_basis(state))


def test_fast_transform_matches_direct_reference():
    rng = np.random.default_rng(360)
    values = rng.standard_normal(360) + 1j * rng.standard_normal(360)
    assert np.max(np.abs(np.fft.fft(values) - dft_direct(values))) < 1e-10
    assert np.max(np.abs(np.fft.ifft(values) - dft_direct(values, inverse=True))) < 1e-10


def test_evolve_one_step_advances():
    orbit = shift_orbit(11)
    for n in range(11):
        here = config_basis_state(orbit, n)
        there = config_basis_state(orbit, (n + 1) % 11)
        assert fidelity(there, evolve(here, orbit.tau)) >= 1 - 1e-10


def test_evolve_respects_tau():
    orbit = shift_orbit(5, tau=0.5)
    moved = evolve(config_basis_state(orbit, 2), 0.5)
    assert fidelity(config_basis_state(orbit, 3), moved) >= 1 - 1e-10


def test_evolve_zero_time_is_identity():
    orbit = shift_orbit(6)
    state = config_basis_state(orbit, 4)
    same = evolve(state, 0.0)
    assert same.basis == CONFIGURATION
    np.testing.assert_allclose(same.amplitudes, state.amplitudes, atol=1e-15)


def test_evolve_full_period_returns():
    orbit = shift_orbit(9)
    state = config_basis_state(orbit, 1)
    assert abs(inner_product(state, evolve(state, orbit.period))) > 1 - 1e-10


def test_evolve_preserves_norm_and_composes():
    rng = np.random.default_rng(5)
    orbit = shift_orbit(16)
    amp = rng.standard_normal(16) + 1j * rng.standard_normal(16)
    amp /= np.linalg.norm(amp)
    state = QuantumState(amp, CONFIGURATION, period=orbit.period)
    for t in rng.uniform(-20, 20, size=8):
        assert abs(evolve(state, t).norm() - 1.0) < 1e-12
    t1, t2 = 1.7, -4.3
    once = evolve(state, t1 + t2)
    twice = evolve(evolve(state, t1), t2)
    np.testing.assert_allclose(once.amplitudes, twice.amplitudes, atol=1e-12)


def test_zero_point_is_a_global_phase():
    orbit = shift_orbit(7)
    state = config_basis_state(orbit, 3)
    t = 2.6
    plain = evolve(state, t)
    offset = evolve(state, t, zero_point=True)
    phase = np.exp(-1j * np.pi * t / orbit.period)
    np.testing.assert_allclose(offset.amplitudes, phase * plain.amplitudes,
                               atol=1e-12)


def test_unit_step_two_states():
    got = unit_step(shift_orbit(2))
    np.testing.assert_allclose(got, [[0, 1], [1, 0]], atol=1e-10)


def test_unit_step_shifts_and_is_unitary():
    orbit = shift_orbit(5)
    u = unit_step(orbit)
    for n in range(5):
        e = np.zeros(5)
        e[n] = 1
        target = np.zeros(5)
        target[(n + 1) % 5] = 1
        np.testing.assert_allclose(u @ e, target, atol=1e-10)
    np.testing.assert_allclose(u.conj().T @ u, np.eye(5), atol=1e-12)
    np.testing.assert_allclose(np.linalg.matrix_power(u, 5), np.eye(5), atol=1e-9)


def test_unit_step_size_cap():
    with pytest.raises(TooLargeError):
        unit_step(shift_orbit(4097))


def test_interpolate_integer_times_are_deltas():
    orbit = shift_orbit(6)
    amp = interpolate_config(orbit, 2.0)
    expected = np.zeros(6)
    expected[2] = 1
    np.testing.assert_allclose(amp, expected, atol=0)


def test_interpolate_half_step_two_states():
    amp = interpolate_config(shift_orbit(2), 0.5)
    np.testing.assert_allclose(np.abs(amp), np.full(2, 1 / np.sqrt(2)), atol=1e-12)


def test_interpolate_matches_evolve_route():
    orbit = shift_orbit(13)
    rng = np.random.default_rng(8)
    start = config_basis_state(orbit, 0)
    for t in rng.uniform(-15, 15, size=10):
        via_kernel = interpolate_config(orbit, t)
        via_spectrum = evolve(start, t).amplitudes
        np.testing.assert_allclose(via_kernel, via_spectrum, atol=1e-10)
        assert abs(np.linalg.norm(via_kernel) - 1.0) < 1e-10


def test_interpolate_overlaps_are_kernel_values():
    orbit = shift_orbit(9, tau=0.5)
    rng = np.random.default_rng(9)
    for _ in range(20):
        t, t_prime = rng.uniform(-5, 5, size=2)
        a = QuantumState(interpolate_config(orbit, t_prime), CONFIGURATION)
        b = QuantumState(interpolate_config(orbit, t), CONFIGURATION)
        expected = periodic_sinc(9, (t_prime - t) / orbit.tau)
        assert abs(inner_product(a, b) - expected) < 1e-10


def test_reconstruct_pure_mode():
    n = 8
    samples = np.exp(2j * np.pi * np.arange(n) / n)
    got = reconstruct(samples, 3.5)
    assert abs(got - np.exp(2j * np.pi * 3.5 / n)) < 1e-10


def test_reconstruct_constant_and_sample_points():
    samples = np.ones(5, dtype=complex)
    assert abs(reconstruct(samples, 1.234) - 1.0) < 1e-12
    wave = np.exp(2j * np.pi * np.arange(5) * 2 / 5)
    for n in range(5):
        assert reconstruct(wave, float(n)) == pytest.approx(wave[n], abs=1e-14)


def test_reconstruct_random_bands():
    rng = np.random.default_rng(12)
    worst = 0.0
    for _ in range(25):
        n = int(rng.integers(1, 65))
        k = int(rng.integers(-10, 11))
        f = random_bandlimited(rng, n, lowest_index=k)
        samples = f.samples()
        for t in rng.uniform(-2 * n, 2 * n, size=40):
            got = reconstruct(samples, t, k=k)
            worst = max(worst, abs(got - f.evaluate(t)))
    assert worst < 1e-9


def test_reconstruct_respects_tau():
    tau = 0.25
    n = 6
    f = random_bandlimited(np.random.default_rng(1), n, period=n * tau)
    samples = f.evaluate(np.arange(n) * tau)
    for t in (0.1, 0.77, 1.3):
        assert abs(reconstruct(samples, t, tau=tau) - f.evaluate(t)) < 1e-10


def test_bandlimited_function_periodicity():
    f = random_bandlimited(np.random.default_rng(4), 9, lowest_index=-3)
    t = np.linspace(0, 9, 13)
    np.testing.assert_allclose(f.evaluate(t + f.period), f.evaluate(t), atol=1e-10)
    np.testing.assert_allclose(f.samples(), f.evaluate(np.arange(9.0)), atol=0)


def test_product_sum_simple_cases():
    ones = np.ones(4, dtype=complex)
    assert bandlimited_product_sum(ones, ones) == pytest.approx(1.0)
    t = np.arange(4.0)
    plus = np.exp(2j * np.pi * t / 4)
    minus = np.exp(-2j * np.pi * t / 4)
    assert bandlimited_product_sum(plus, minus) == pytest.approx(1.0, abs=1e-14)
    with pytest.raises(LengthMismatchError):
        bandlimited_product_sum(np.ones(3), np.ones(4))


def test_product_sum_equals_period_average():
    # oracle: the same product averaged on a 4x finer grid, both estimating
    # (1/T) * integral f g; bands are conjugate (lowest indices sum to 1-N)
    # so no nonzero multiple of N is aliased and both grids are exact
    rng = np.random.default_rng(20)
    for _ in range(30):
        n = int(rng.integers(1, 33))
        k = int(rng.integers(-6, 7))
        f = random_bandlimited(rng, n, lowest_index=k)
        g = random_bandlimited(rng, n, lowest_index=1 - n - k)
        coarse = bandlimited_product_sum(f.samples(), g.samples())
        fine_t = np.arange(4 * n) * (f.period / (4 * n))
        fine = np.sum(f.evaluate(fine_t) * g.evaluate(fine_t)) / (4 * n)
        assert abs(coarse - fine) < 1e-9


def test_closure_single_state_is_exact():
    assert closure_defect(shift_orbit(1), 2) < 1e-15


@pytest.mark.parametrize("grid", [16, 64])
def test_closure_identity_at_and_above_nyquist(grid):
    assert closure_defect(shift_orbit(8), grid) < 1e-9


def test_closure_with_tau():
    assert closure_defect(shift_orbit(4, tau=0.5), 16) < 1e-10


def test_closure_grid_validation():
    with pytest.raises(ValueError):
        closure_defect(shift_orbit(8), 15)


def test_dirac_constant_function():
    orbit = shift_orbit(4)
    coeff = np.zeros(4, dtype=complex)
    coeff[0] = 1.0
    f = BandlimitedFunction(coeff, period=orbit.period)
    assert dirac_defect(orbit, f, 1.37) < 1e-10


def test_dirac_single_mode():
    orbit = shift_orbit(8)
    coeff = np.zeros(8, dtype=complex)
    coeff[1] = 1.0
    f = BandlimitedFunction(coeff, period=orbit.period)
    assert dirac_defect(orbit, f, 0.3 * orbit.period) < 1e-9


def test_dirac_random_functions():
    rng = np.random.default_rng(23)
    orbit = shift_orbit(8)
    for _ in range(50):
        f = random_bandlimited(rng, 8, period=orbit.period)
        t_prime = float(rng.uniform(0, orbit.period))
        assert dirac_defect(orbit, f, t_prime) < 1e-8


def test_dirac_band_validation():
    orbit = shift_orbit(4)
    with pytest.raises(BandwidthMismatchError):
        dirac_defect(orbit, BandlimitedFunction(np.ones(3), period=4.0), 0.0)
    with pytest.raises(BandwidthMismatchError):
        dirac_defect(orbit, BandlimitedFunction(np.ones(4), period=4.0,
                                                lowest_index=1), 0.0)
    with pytest.raises(BandwidthMismatchError):
        dirac_defect(orbit, BandlimitedFunction(np.ones(4), period=5.0), 0.0)


def test_state_json_round_trip():
    orbit = shift_orbit(3)
    state = to_energy_basis(config_basis_state(orbit, 1))
    data = state_to_jsonable(state)
    assert data["basis"] == ENERGY
    again = state_from_jsonable(data)
    np.testing.assert_allclose(again.amplitudes, state.amplitudes, atol=0)
    assert again.orbit_id == state.orbit_id
    with pytest.raises(ValueError):
        state_from_jsonable({"basis": ENERGY, "re": [1.0]})


def test_cross_orbit_operations_rejected():
    dec = decompose_orbits(from_permutation([1, 0, 3, 2]))
    a = config_basis_state(dec.orbits[0], 0)
    b = config_basis_state(dec.orbits[1], 0)
    with pytest.raises(OrbitMismatchError):
        inner_product(a, b)
    short = QuantumState(np.array([1.0 + 0j]), CONFIGURATION)
    with pytest.raises(LengthMismatchError):
        inner_product(a, short)
