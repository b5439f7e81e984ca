"""Named invariant checks over one dynamics: the engine behind `verify`.

Every promise the library makes is measured here as a defect against a
tolerance and reported under a stable dotted name, so a single run yields a
complete machine-readable health report.  Checks that do not depend on the
input (kernel identities, moment integrals, the lattice-gas builder) run on
fixed reference sizes; orbit-dependent checks run on representative orbits
of the input, clipped to desk-scale sizes so the whole suite stays well
under a minute.  A raised error inside any check becomes a failed check,
never a crash.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .config import Config, DEFAULT_CONFIG
from .dynamics import (
    ClassicalDynamics,
    Orbit,
    OrbitDecomposition,
    decompose_orbits,
    from_two_channel_lga,
    load_dynamics,
    orbit_of,
    step,
)
from .errors import NotBijectiveError
from .kernel import kernel_direct_sum, periodic_sinc, sinc_limit
from .observables import (
    ParticleModel,
    average_energy,
    gaussian_variance,
    momentum,
    particle_amplitude,
    second_moment,
    width_report,
)
from .oversample import (
    bandlimited_basis_state,
    bandlimited_evolve,
    extended_spectrum,
    offset_profiles,
    oversample,
    verify_isomorphism,
)
from .spectral import (
    CONFIGURATION,
    ENERGY,
    MAX_SPECTRAL_STATES,
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
    to_config_basis,
    to_energy_basis,
    unit_step,
)

KERNEL_SIZES = [1, 2, 5, 101, 1024]
OVERSAMPLE_FACTORS = [1, 2, 4, 8]
MAX_MATRIX_ORBIT = 1024   # one-update unitary materialized below this size
MAX_QUADRATURE_ORBIT = 256  # closure/dirac grids stay small


@dataclass(frozen=True)
class Check:
    """One invariant measurement: a named defect against its tolerance."""

    name: str
    defect: float
    tolerance: float
    error: str | None = None

    @property
    def passed(self) -> bool:
        return self.error is None and self.defect <= self.tolerance

    def to_jsonable(self) -> dict:
        data = {
            "name": self.name,
            "defect": self.defect if math.isfinite(self.defect) else None,
            "tolerance": self.tolerance,
            "passed": self.passed,
        }
        if self.error is not None:
            data["error"] = self.error
        return data


def _guard(name: str, tolerance: float, fn) -> Check:
    try:
        return Check(name, float(fn()), tolerance)
    except Exception as exc:  # failed check, not a crash
        return Check(name, math.inf, tolerance, error=f"{type(exc).__name__}: {exc}")


def _representatives(decomp: OrbitDecomposition, cap: int = 4) -> list[Orbit]:
    """One orbit per distinct length; at most the `cap` smallest and largest."""
    by_length: dict[int, Orbit] = {}
    for orbit in decomp.orbits:
        by_length.setdefault(orbit.length, orbit)
    lengths = sorted(by_length)
    if len(lengths) > 2 * cap:
        lengths = lengths[:cap] + lengths[-cap:]
    return [by_length[n] for n in lengths]


def _reference_orbit(length: int, tau: float) -> Orbit:
    # stand-in when the input has no orbit small enough for a check; the
    # identities measured depend only on length and step time
    return Orbit(np.arange(length, dtype=np.int64), tau=tau, orbit_id=None)


def _random_state(rng: np.random.Generator, orbit: Orbit, basis: str) -> QuantumState:
    amp = rng.standard_normal(orbit.length) + 1j * rng.standard_normal(orbit.length)
    amp /= np.sqrt(np.sum(np.abs(amp) ** 2))
    return QuantumState(amp, basis, orbit_id=orbit.orbit_id, period=orbit.period)


# --- dynamics ---


def _dynamics_checks(
    dyn: ClassicalDynamics,
    decomp: OrbitDecomposition,
    reps: list[Orbit],
    rng: np.random.Generator,
    config: Config,
) -> list[Check]:
    def bijective():
        ordered = np.sort(dyn.image)
        return float(np.count_nonzero(ordered != np.arange(dyn.num_states)))

    def partition():
        lengths = np.fromiter(
            (o.length for o in decomp.orbits), dtype=np.int64, count=len(decomp.orbits)
        )
        bad = 0.0
        bad += abs(int(lengths.sum()) - dyn.num_states)
        counts = np.bincount(decomp.orbit_index, minlength=lengths.size)
        bad += float(np.count_nonzero(counts != lengths))
        # stepping stays inside the orbit and advances the position by one
        image = dyn.image
        if not np.array_equal(decomp.orbit_index[image], decomp.orbit_index):
            bad += 1.0
        expected_pos = (decomp.position + 1) % lengths[decomp.orbit_index]
        if not np.array_equal(decomp.position[image], expected_pos):
            bad += 1.0
        return bad

    def period_closure():
        bad = 0
        for orbit in reps:
            start = int(orbit.members[0])
            if step(dyn, start, orbit.length) != start:
                bad += 1
            mid = int(orbit.members[rng.integers(orbit.length)])
            if step(dyn, mid, orbit.length) != mid:
                bad += 1
        return float(bad)

    def orbit_match():
        bad = 0
        for orbit in reps:
            pick = int(orbit.members[rng.integers(orbit.length)])
            lazy = orbit_of(dyn, pick, config)
            if not np.array_equal(lazy.members, orbit.members):
                bad += 1
        return float(bad)

    def lga_bijective():
        bad = 0
        for sites in range(1, 7):
            for reflect in (False, True):
                gas = from_two_channel_lga(sites, reflect)
                if not np.array_equal(np.sort(gas.image), np.arange(gas.num_states)):
                    bad += 1
        return float(bad)

    return [
        _guard("dynamics.bijective", 0.0, bijective),
        _guard("dynamics.orbit_partition", 0.0, partition),
        _guard("dynamics.period_closure", 0.0, period_closure),
        _guard("dynamics.orbit_of_match", 0.0, orbit_match),
        _guard("dynamics.lga_bijective", 0.0, lga_bijective),
    ]


# --- kernel ---


def _kernel_checks(rng: np.random.Generator) -> list[Check]:
    def kronecker():
        worst = 0.0
        for n in KERNEL_SIZES:
            for mult in (-2, -1, 0, 1, 2):
                worst = max(worst, abs(periodic_sinc(n, mult * n) - 1.0))
            if n >= 2:
                js = rng.integers(1, n, size=min(8, n - 1))
                worst = max(worst, float(np.max(np.abs(periodic_sinc(n, js)))))
        return worst

    def periodicity():
        worst = 0.0
        for n in KERNEL_SIZES:
            u = rng.uniform(-2.0 * n, 2.0 * n, size=50)
            worst = max(
                worst,
                float(np.max(np.abs(periodic_sinc(n, u + n) - periodic_sinc(n, u)))),
            )
        return worst

    def closed_vs_direct():
        worst = 0.0
        for _ in range(2000):
            n = int(rng.integers(1, 1025))
            u = float(rng.uniform(-2.0 * n, 2.0 * n))
            worst = max(worst, abs(periodic_sinc(n, u) - kernel_direct_sum(n, u)))
        return worst

    def conjugate_symmetry():
        worst = 0.0
        for n in KERNEL_SIZES:
            u = rng.uniform(-2.0 * n, 2.0 * n, size=50)
            worst = max(
                worst,
                float(
                    np.max(
                        np.abs(periodic_sinc(n, -u) - np.conj(periodic_sinc(n, u)))
                    )
                ),
            )
        return worst

    def partition_of_unity():
        worst = 0.0
        for n in KERNEL_SIZES:
            for t in rng.uniform(0.0, n, size=20):
                total = np.sum(periodic_sinc(n, np.arange(n) - t))
                worst = max(worst, abs(total - 1.0))
        return worst

    def sinc_limit_agreement():
        u = np.linspace(-3.0, 3.0, 601)
        return float(np.max(np.abs(periodic_sinc(100_000, u) - sinc_limit(u))))

    return [
        _guard("kernel.kronecker", 1e-12, kronecker),
        _guard("kernel.periodicity", 1e-12, periodicity),
        _guard("kernel.closed_vs_direct", 1e-11, closed_vs_direct),
        _guard("kernel.conjugate_symmetry", 1e-12, conjugate_symmetry),
        _guard("kernel.partition_of_unity", 1e-10, partition_of_unity),
        _guard("kernel.sinc_limit", 1e-4, sinc_limit_agreement),
    ]


# --- spectral ---


def _spectral_checks(
    reps: list[Orbit], rng: np.random.Generator, config: Config
) -> list[Check]:
    quad_orbits = [o for o in reps if o.length <= MAX_QUADRATURE_ORBIT] or [
        _reference_orbit(n, reps[0].tau) for n in (2, 8, 32)
    ]

    def step_isomorphism():
        worst = 0.0
        for orbit in reps:
            n = orbit.length
            if n <= MAX_MATRIX_ORBIT:
                u = unit_step(orbit)
                cols = np.arange(n)
                worst = max(
                    worst, float(np.max(1.0 - np.abs(u[(cols + 1) % n, cols])))
                )
            else:
                for pos in rng.integers(0, n, size=16):
                    stepped = evolve(config_basis_state(orbit, int(pos)), orbit.tau)
                    target = config_basis_state(orbit, int(pos + 1) % n)
                    worst = max(worst, 1.0 - fidelity(stepped, target))
        return worst

    def unitarity():
        worst = 0.0
        for orbit in reps:
            for _ in range(3):
                state = _random_state(rng, orbit, ENERGY)
                t = float(rng.uniform(-2.0 * orbit.period, 2.0 * orbit.period))
                worst = max(worst, abs(evolve(state, t).norm() - 1.0))
        return worst

    def interpolation_consistency():
        worst = 0.0
        for orbit in reps:
            start = config_basis_state(orbit, 0)
            for t in rng.uniform(0.0, orbit.period, size=5):
                via_evolve = to_config_basis(
                    evolve(to_energy_basis(start), float(t))
                ).amplitudes
                direct = interpolate_config(orbit, float(t))
                worst = max(worst, float(np.max(np.abs(direct - via_evolve))))
        return worst

    def overlap_kernel():
        worst = 0.0
        for orbit in reps:
            start = config_basis_state(orbit, 0)
            for _ in range(20):
                t, tp = rng.uniform(0.0, orbit.period, size=2)
                overlap = inner_product(
                    evolve(start, float(tp)), evolve(start, float(t))
                )
                expected = periodic_sinc(orbit.length, (tp - t) / orbit.tau)
                worst = max(worst, abs(overlap - expected))
        return worst

    def config_energy():
        worst = 0.0
        for orbit in reps:
            spec = energy_spectrum(orbit, config)
            state = config_basis_state(orbit, int(rng.integers(orbit.length)))
            expected = config.h * (orbit.length - 1) / (2.0 * orbit.period)
            got = average_energy(state, spec)
            scale = abs(expected) if expected != 0.0 else 1.0
            worst = max(worst, abs(got - expected) / scale)
        return worst

    def zero_point_energy():
        worst = 0.0
        expected = config.h / (2.0 * config.tau)
        for orbit in reps:
            spec = energy_spectrum(orbit, config, zero_point=True)
            state = config_basis_state(orbit, 0)
            worst = max(worst, abs(average_energy(state, spec) - expected) / expected)
        return worst

    def basis_roundtrip():
        worst = 0.0
        for orbit in reps:
            state = _random_state(rng, orbit, CONFIGURATION)
            back = to_config_basis(to_energy_basis(state))
            worst = max(
                worst, float(np.max(np.abs(back.amplitudes - state.amplitudes)))
            )
        return worst

    def dft_reference():
        sizes = sorted({min(o.length, 512) for o in reps[:3]} | {360})
        worst = 0.0
        for size in sizes:
            v = rng.standard_normal(size) + 1j * rng.standard_normal(size)
            worst = max(worst, float(np.max(np.abs(np.fft.fft(v) - dft_direct(v)))))
            worst = max(
                worst,
                float(np.max(np.abs(np.fft.ifft(v) - dft_direct(v, inverse=True)))),
            )
        return worst

    def reconstruct_exact():
        worst = 0.0
        for _ in range(10):
            modes = int(rng.integers(1, 65))
            k = int(rng.integers(-32, 33))
            f = random_bandlimited(rng, modes, k)
            g = random_bandlimited(rng, modes, k)
            fs, gs = f.samples(), g.samples()
            j = int(rng.integers(modes))
            worst = max(worst, abs(reconstruct(fs, float(j), k) - fs[j]))
            for t in rng.uniform(0.0, modes, size=5):
                t = float(t)
                worst = max(worst, abs(reconstruct(fs, t, k) - f.evaluate(t)))
                mixed = reconstruct(fs + 2.0 * gs, t, k)
                parts = reconstruct(fs, t, k) + 2.0 * reconstruct(gs, t, k)
                worst = max(worst, abs(mixed - parts))
        return worst

    def product_sum():
        worst = 0.0
        for _ in range(20):
            n = int(rng.integers(2, 65))
            k_f = int(rng.integers(-32, 33))
            f = random_bandlimited(rng, n, k_f)
            g = random_bandlimited(rng, n, 1 - n - k_f)
            coarse = bandlimited_product_sum(f.samples(), g.samples())
            t4 = np.arange(4 * n) * (n / (4.0 * n))
            fine = np.sum(f.evaluate(t4) * g.evaluate(t4)) / (4.0 * n)
            worst = max(worst, abs(coarse - fine))
        return worst

    def closure():
        worst = 0.0
        for orbit in quad_orbits:
            n = orbit.length
            for grid in (2 * n, 4 * n):
                worst = max(worst, closure_defect(orbit, grid))
        return worst

    def dirac():
        worst = 0.0
        for orbit in quad_orbits:
            for _ in range(3):
                f = random_bandlimited(rng, orbit.length, 0, period=orbit.period)
                t_prime = float(rng.uniform(0.0, orbit.period))
                worst = max(worst, dirac_defect(orbit, f, t_prime))
        return worst

    return [
        _guard("spectral.step_isomorphism", 1e-10, step_isomorphism),
        _guard("spectral.unitarity", 1e-12, unitarity),
        _guard("spectral.interpolation_consistency", 1e-10, interpolation_consistency),
        _guard("spectral.overlap_kernel", 1e-10, overlap_kernel),
        _guard("spectral.config_energy", 1e-10, config_energy),
        _guard("spectral.zero_point_energy", 1e-12, zero_point_energy),
        _guard("spectral.basis_roundtrip", 1e-11, basis_roundtrip),
        _guard("spectral.dft_reference", 1e-10, dft_reference),
        _guard("spectral.reconstruct_exact", 1e-9, reconstruct_exact),
        _guard("spectral.product_sum", 1e-9, product_sum),
        _guard("spectral.closure", 1e-8, closure),
        _guard("spectral.dirac", 1e-8, dirac),
    ]


# --- oversampling ---


def _oversample_base(reps: list[Orbit]) -> Orbit:
    limit = MAX_SPECTRAL_STATES // max(OVERSAMPLE_FACTORS)
    usable = [o for o in reps if 2 <= o.length <= limit]
    if usable:
        return usable[0]
    return _reference_orbit(5, reps[0].tau)


def _oversample_checks(
    base: Orbit, rng: np.random.Generator, config: Config
) -> list[Check]:
    n = base.length
    refined = [oversample(base, m) for m in OVERSAMPLE_FACTORS]

    def energy_match():
        expected = config.h * (n - 1) / (2.0 * base.period)
        scale = abs(expected) if expected != 0.0 else 1.0
        worst = 0.0
        for ov in refined:
            spec = extended_spectrum(ov, config)
            state = bandlimited_basis_state(ov, int(rng.integers(n)))
            worst = max(worst, abs(average_energy(state, spec) - expected) / scale)
        return worst

    def classical_steps():
        worst = 0.0
        for ov in refined:
            for k in rng.integers(0, n, size=4):
                walked = bandlimited_evolve(ov, float(k) * base.tau)
                target = bandlimited_basis_state(ov, int(k) % n)
                worst = max(worst, 1.0 - fidelity(walked, target))
        return worst

    def regroup_exact():
        worst = 0.0
        for ov in refined:
            t = float(rng.uniform(0.0, base.period))
            state = bandlimited_evolve(ov, t)
            regrouped = state.amplitudes.reshape(n, ov.factor).T * np.sqrt(ov.factor)
            worst = max(
                worst, float(np.max(np.abs(offset_profiles(ov, t) - regrouped)))
            )
        return worst

    def overlap_m_independent():
        worst = 0.0
        for _ in range(10):
            t, tp = rng.uniform(0.0, base.period, size=2)
            overlaps = [
                inner_product(
                    bandlimited_evolve(ov, float(tp)), bandlimited_evolve(ov, float(t))
                )
                for ov in refined
            ]
            worst = max(worst, max(abs(v - overlaps[0]) for v in overlaps))
        return worst

    def isomorphism_defect():
        worst = 0.0
        for ov in refined:
            for _ in range(10):
                t, tp = rng.uniform(0.0, base.period, size=2)
                worst = max(worst, verify_isomorphism(ov, float(t), float(tp)))
        return worst

    return [
        _guard("oversample.energy_match", 1e-10, energy_match),
        _guard("oversample.classical_steps", 1e-10, classical_steps),
        _guard("oversample.regroup_exact", 0.0, regroup_exact),
        _guard("oversample.overlap_m_independent", 1e-9, overlap_m_independent),
        _guard("oversample.isomorphism_defect", 1e-9, isomorphism_defect),
    ]


# --- observables ---


def _observable_checks(
    reps: list[Orbit], rng: np.random.Generator, config: Config
) -> list[Check]:
    models = [ParticleModel(9), ParticleModel(5, spacing=0.5, speed=2.0)]

    def bandwidth_equality():
        worst = 0.0
        for orbit in reps:
            spec = energy_spectrum(orbit, config)
            report = width_report(config_basis_state(orbit, 0), spec)
            worst = max(
                worst, abs(report.bandwidth - (orbit.length - 1) / orbit.period)
            )
        return worst

    def first_moment_slack():
        # states that sweep through N mutually orthogonal configurations:
        # configuration states and flat-magnitude random-phase states
        worst = 0.0
        for orbit in reps:
            spec = energy_spectrum(orbit, config)
            states = [config_basis_state(orbit, 0)]
            phases = np.exp(2j * np.pi * rng.uniform(size=orbit.length))
            states.append(
                QuantumState(
                    phases / np.sqrt(orbit.length),
                    ENERGY,
                    orbit_id=orbit.orbit_id,
                    period=orbit.period,
                )
            )
            for state in states:
                report = width_report(state, spec)
                bound = max(report.b_min_states, report.b_min_pair)
                worst = max(worst, max(0.0, bound - report.first_moment_width))
        return worst

    def hop_normalization():
        worst = 0.0
        for model in models:
            x = model.spacing * np.arange(model.sites)
            for t in rng.uniform(0.0, model.period, size=5):
                psi = particle_amplitude(model, x, float(t))
                worst = max(worst, abs(float(np.sum(np.abs(psi) ** 2)) - 1.0))
        return worst

    def hop_localization():
        worst = 0.0
        for model in models:
            x = model.spacing * np.arange(model.sites)
            k = int(rng.integers(3 * model.sites))
            psi = particle_amplitude(model, x, k * model.step_time)
            target = np.zeros(model.sites)
            target[k % model.sites] = 1.0
            worst = max(worst, float(np.max(np.abs(np.abs(psi) ** 2 - target))))
        return worst

    def momentum_separation():
        worst = 0.0
        for model in models:
            worst = max(
                worst, abs(momentum(model, config) * model.spacing - config.h / 2.0)
            )
        return worst

    def second_moment_linear():
        m1000 = second_moment(1000)
        asymptote = 1000.0 / (2.0 * np.pi**2)
        ratio = second_moment(2000) / m1000
        return max(abs(m1000 / asymptote - 1.0), abs(ratio / 2.0 - 1.0))

    def gaussian_width():
        return abs(gaussian_variance() * 2.0 * np.pi - 1.0)

    def figure_lobe():
        u = np.linspace(-0.5, 0.5, 201)
        s2 = np.abs(periodic_sinc(100, u)) ** 2
        return float(np.max(np.abs(s2 - np.exp(-np.pi * u**2))))

    def figure_zeros():
        k = np.array([-5, -4, -3, -2, -1, 1, 2, 3, 4, 5], dtype=float)
        return float(np.max(np.abs(periodic_sinc(100, k)) ** 2))

    return [
        _guard("observables.bandwidth_equality", 1e-12, bandwidth_equality),
        _guard("observables.first_moment_slack", 1e-10, first_moment_slack),
        _guard("observables.hop_normalization", 1e-10, hop_normalization),
        _guard("observables.hop_localization", 1e-12, hop_localization),
        _guard("observables.momentum_separation", 1e-12, momentum_separation),
        _guard("observables.second_moment_linear", 0.05, second_moment_linear),
        _guard("observables.gaussian_variance", 0.01, gaussian_width),
        _guard("observables.figure_lobe", 0.06, figure_lobe),
        _guard("observables.figure_zeros", 1e-20, figure_zeros),
    ]


def _config_echo(config: Config) -> dict:
    return {
        "tau": config.tau,
        "h": config.h,
        "tolerance_abs": config.tolerance_abs,
        "tolerance_rel": config.tolerance_rel,
    }


def run_verify(dyn: ClassicalDynamics, config: Config = DEFAULT_CONFIG) -> dict:
    """Measure every library invariant against `dyn`; return the full report.

    Deterministic for a given (input, seed); check order is fixed.
    """
    rng = np.random.default_rng(config.rng_seed)
    decomp = decompose_orbits(dyn, config)
    reps = _representatives(decomp)
    spectral_reps = [o for o in reps if o.length <= MAX_SPECTRAL_STATES] or [
        _reference_orbit(101, config.tau)
    ]
    checks: list[Check] = []
    checks += _dynamics_checks(dyn, decomp, reps, rng, config)
    checks += _kernel_checks(rng)
    checks += _spectral_checks(spectral_reps, rng, config)
    checks += _oversample_checks(_oversample_base(spectral_reps), rng, config)
    checks += _observable_checks(spectral_reps, rng, config)
    num_passed = sum(1 for c in checks if c.passed)
    return {
        "seed": config.rng_seed,
        "config": _config_echo(config),
        "input": {"num_states": dyn.num_states, "kind": dyn.kind},
        "checks": [c.to_jsonable() for c in checks],
        "num_checks": len(checks),
        "num_passed": num_passed,
        "all_passed": num_passed == len(checks),
    }


def verify_file(path: str, config: Config = DEFAULT_CONFIG) -> dict:
    """Load a dynamics file and verify it.

    A file that fails bijectivity validation yields a one-check failing
    report rather than an exception.
    """
    try:
        dyn = load_dynamics(path)
    except NotBijectiveError as exc:
        failed = Check("dynamics.bijective", 1.0, 0.0, error=str(exc))
        return {
            "seed": config.rng_seed,
            "config": _config_echo(config),
            "input": {"path": path},
            "checks": [failed.to_jsonable()],
            "num_checks": 1,
            "num_passed": 0,
            "all_passed": False,
        }
    report = run_verify(dyn, config)
    report["input"]["path"] = path
    return report
