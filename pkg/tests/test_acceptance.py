"""Acceptance gate: one test per shipped guarantee, at the stated tolerance.

Run with `pytest tests/test_acceptance.py -v` to get one pass/fail line per
criterion.  Measured defects are printed (visible with -s or on failure).
Criterion 10's central-lobe clause is strict-xfail: with the comparator fixed
to exp(-pi u^2), the gap at the lobe edge is 0.0506, and no faithful
implementation can land under 0.02; the honest measured value is printed.
"""

import json
import time

import numpy as np
import pytest
from click.testing import CliRunner

from qorbit.cli import main as cli_main
from qorbit.config import Config
from qorbit.dynamics import decompose_orbits, from_particle_shift, from_permutation
from qorbit.kernel import kernel_direct_sum, periodic_sinc, sinc_limit
from qorbit.observables import (
    average_energy,
    gaussian_variance,
    second_moment,
    width_report,
)
from qorbit.oversample import (
    bandlimited_basis_state,
    extended_spectrum,
    oversample,
    verify_isomorphism,
)
from qorbit.spectral import (
    ENERGY,
    QuantumState,
    closure_defect,
    config_basis_state,
    dirac_defect,
    energy_spectrum,
    random_bandlimited,
    reconstruct,
    unit_step,
)
from qorbit.verify import run_verify


def shift_orbit(n, config=Config()):
    return decompose_orbits(from_particle_shift(n), config).orbits[0]


def step_defect(orbit):
    u = unit_step(orbit)
    cols = np.arange(orbit.length)
    return float(np.max(1.0 - np.abs(u[(cols + 1) % orbit.length, cols])))


def test_criterion_01_unit_step_reproduces_classical_dynamics():
    t0 = time.monotonic()
    worst = step_defect(shift_orbit(101))
    rng = np.random.default_rng(1)
    for _ in range(20):
        size = int(rng.integers(1, 513))
        decomp = decompose_orbits(from_permutation(rng.permutation(size)))
        for orbit in decomp.orbits:
            worst = max(worst, step_defect(orbit))
    elapsed = time.monotonic() - t0
    print(f"criterion 1: step fidelity defect {worst:.3e} in {elapsed:.2f}s")
    assert worst <= 1e-10
    assert elapsed < 10.0


@pytest.mark.parametrize("tau,h", [(1.0, 1.0), (0.25, 2.0)])
def test_criterion_02_mean_energy_matches_flat_spectrum(tau, h):
    config = Config(tau=tau, h=h)
    worst_plain = worst_zp = 0.0
    for n in [1, 2, 5, 101, 1024]:
        orbit = shift_orbit(n, config)
        state = config_basis_state(orbit, 0)
        expected = h * (n - 1) / (2.0 * orbit.period)
        got = average_energy(state, energy_spectrum(orbit, config))
        scale = expected if expected > 0 else 1.0
        worst_plain = max(worst_plain, abs(got - expected) / scale)
        zp = average_energy(state, energy_spectrum(orbit, config, zero_point=True))
        worst_zp = max(worst_zp, abs(zp - h / (2.0 * tau)) / (h / (2.0 * tau)))
    print(f"criterion 2: energy rel defect {worst_plain:.3e}, "
          f"zero-point {worst_zp:.3e}")
    assert worst_plain <= 1e-10
    assert worst_zp <= 1e-12


def test_criterion_03_kernel_closed_form():
    rng = np.random.default_rng(3)
    worst = 0.0
    for _ in range(10_000):
        n = int(rng.integers(1, 1025))
        u = float(rng.uniform(-2.0 * n, 2.0 * n))
        worst = max(worst, abs(periodic_sinc(n, u) - kernel_direct_sum(n, u)))
    # Kronecker property holds exactly, not just to tolerance
    for n in [1, 2, 5, 101, 1024]:
        for mult in (-2, -1, 0, 1, 2):
            assert periodic_sinc(n, mult * n) == 1.0
        for j in range(1, min(n, 7)):
            assert periodic_sinc(n, j) == 0.0
    u = np.linspace(-4.0, 4.0, 801)
    limit_dev = float(np.max(np.abs(periodic_sinc(100_000, u) - sinc_limit(u))))
    print(f"criterion 3: oracle defect {worst:.3e}, limit dev {limit_dev:.3e}")
    assert worst <= 1e-11
    assert limit_dev < 1e-4


def test_criterion_04_sample_reconstruction():
    rng = np.random.default_rng(4)
    worst = 0.0
    for _ in range(100):
        modes = int(rng.integers(1, 65))
        k = int(rng.integers(-64, 65))
        f = random_bandlimited(rng, modes, k)
        samples = f.samples()
        for t in rng.uniform(0.0, modes, size=10):  # 1000 points total
            t = float(t)
            worst = max(worst, abs(reconstruct(samples, t, k) - f.evaluate(t)))
    print(f"criterion 4: reconstruction defect {worst:.3e}")
    assert worst < 1e-9


def test_criterion_05_product_sum_equals_oversampled_estimate():
    rng = np.random.default_rng(5)
    worst = 0.0
    for _ in range(100):
        n = int(rng.integers(2, 65))
        k = int(rng.integers(-32, 33))
        f = random_bandlimited(rng, n, k)
        g = random_bandlimited(rng, n, 1 - n - k)  # conjugate band, same width
        coarse = np.sum(f.samples() * g.samples()) / n
        t4 = np.arange(4 * n) * 0.25
        fine = np.sum(f.evaluate(t4) * g.evaluate(t4)) / (4 * n)
        worst = max(worst, abs(coarse - fine))
    print(f"criterion 5: product-sum defect {worst:.3e}")
    assert worst <= 1e-9


def test_criterion_06_closure_and_dirac():
    rng = np.random.default_rng(6)
    orbits = [shift_orbit(n) for n in (2, 8, 32)]
    worst_closure = max(
        closure_defect(orbit, grid)
        for orbit in orbits
        for grid in (2 * orbit.length, 4 * orbit.length)
    )
    worst_dirac = 0.0
    for i in range(50):
        orbit = orbits[i % 3]
        f = random_bandlimited(rng, orbit.length, 0, period=orbit.period)
        t_prime = float(rng.uniform(0.0, orbit.period))
        worst_dirac = max(worst_dirac, dirac_defect(orbit, f, t_prime))
    print(f"criterion 6: closure {worst_closure:.3e}, dirac {worst_dirac:.3e}")
    assert worst_closure < 1e-8
    assert worst_dirac < 1e-8


def test_criterion_07_oversampled_overlaps_and_energy():
    rng = np.random.default_rng(7)
    orbit = shift_orbit(5)
    base_energy = average_energy(
        config_basis_state(orbit, 0), energy_spectrum(orbit)
    )
    worst_overlap = worst_energy = 0.0
    for factor in [1, 2, 4, 8]:
        ov = oversample(orbit, factor)
        for _ in range(100):
            t, tp = rng.uniform(0.0, orbit.period, size=2)
            worst_overlap = max(
                worst_overlap, verify_isomorphism(ov, float(t), float(tp))
            )
        refined = average_energy(
            bandlimited_basis_state(ov, 0), extended_spectrum(ov)
        )
        worst_energy = max(worst_energy, abs(refined - base_energy) / base_energy)
    print(f"criterion 7: overlap defect {worst_overlap:.3e}, "
          f"energy defect {worst_energy:.3e}")
    assert worst_overlap < 1e-9
    assert worst_energy <= 1e-10


def test_criterion_08_second_moment_and_comparator():
    moment = second_moment(1000)
    target = 1000.0 / (2.0 * np.pi**2)  # 50.66
    linearity = second_moment(2000) / moment
    variance = gaussian_variance()
    print(f"criterion 8: moment {moment:.4f} (target {target:.4f}), "
          f"ratio {linearity:.6f}, variance {variance:.6f}")
    assert abs(moment - target) / target < 0.05
    assert abs(linearity - 2.0) / 2.0 < 0.05
    assert abs(variance - 1.0 / (2.0 * np.pi)) * 2.0 * np.pi < 0.01


def test_criterion_09_width_bounds():
    rng = np.random.default_rng(9)
    worst_eq = 0.0
    worst_slack = np.inf
    for n in [1, 2, 5, 101, 1024]:
        orbit = shift_orbit(n)
        spec = energy_spectrum(orbit)
        states = [config_basis_state(orbit, 0)]
        # flat-magnitude random-phase states also sweep N orthogonal points
        phases = np.exp(2j * np.pi * rng.uniform(size=n))
        states.append(
            QuantumState(phases / np.sqrt(n), ENERGY, orbit_id=orbit.orbit_id,
                         period=orbit.period)
        )
        for state in states:
            report = width_report(state, spec)
            worst_eq = max(
                worst_eq, abs(report.bandwidth - (n - 1) / orbit.period)
            )
            bound = max(report.b_min_states, report.b_min_pair)
            worst_slack = min(worst_slack, report.first_moment_width - bound)
    print(f"criterion 9: equality defect {worst_eq:.3e}, "
          f"min slack {worst_slack:.3e}")
    assert worst_eq <= 1e-12
    assert worst_slack >= -1e-10


def _figure_table():
    result = CliRunner().invoke(cli_main, ["figure", "--N", "100", "--no-plot"])
    assert result.exit_code == 0
    rows = [line.split(",") for line in result.output.splitlines()[1:]]
    return np.array([[float(c) for c in row] for row in rows])


@pytest.mark.xfail(
    strict=True,
    reason="central-lobe gap to exp(-pi u^2) reaches 0.0506 at |u| = 0.5; "
    "the 0.02 target is unattainable for the fixed comparator",
)
def test_criterion_10_central_lobe_within_two_percent():
    table = _figure_table()
    central = np.abs(table[:, 0]) <= 0.5
    gap = float(np.max(np.abs(table[central, 1] - table[central, 2])))
    print(f"criterion 10 (lobe): measured gap {gap:.4f}")
    assert gap < 0.02


def test_criterion_10_integer_zeros():
    table = _figure_table()
    integers = np.abs(table[:, 0] - np.round(table[:, 0])) < 1e-9
    nonzero = integers & (np.abs(table[:, 0]) > 0.5)
    worst = float(np.max(table[nonzero, 1]))
    exact = float(
        np.max(np.abs(periodic_sinc(100, np.arange(1, 6, dtype=float))) ** 2)
    )
    print(f"criterion 10 (zeros): grid {worst:.3e}, exact integers {exact:.3e}")
    assert worst < 1e-20
    assert exact < 1e-20


def test_full_verify_suite_under_a_minute():
    t0 = time.monotonic()
    report = run_verify(from_particle_shift(101))
    elapsed = time.monotonic() - t0
    print(f"verify: {report['num_passed']}/{report['num_checks']} "
          f"in {elapsed:.2f}s")
    assert report["all_passed"]
    assert elapsed < 60.0
