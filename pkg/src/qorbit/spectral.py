"""Quantum states and evolution on a single orbit.

An orbit of length N behaves as an N-state cyclic quantum system.  The two
bases used throughout:

  * configuration basis |n>, n = 0..N-1: the classical states in orbit order;
  * energy basis |E:m>, m = 0..N-1, with E_m = m*h/T (T = N*tau), plus an
    optional uniform zero-point offset h/(2T).

Transform conventions (fixed; everything else follows from them):

  energy amplitudes   a_m = (1/sqrt(N)) * sum_n c_n exp(-2 pi i n m / N)
  config amplitudes   c_n = (1/sqrt(N)) * sum_m a_m exp(+2 pi i n m / N)

so a configuration state is the uniform superposition of all N energy levels.
Evolution multiplies energy amplitude m by exp(-2 pi i t m / (N tau)); after
exactly tau it advances the classical state by one step, and at intermediate
times the configuration amplitudes are values of the periodic sinc kernel.

Energy-basis storage is the primary representation for evolution; the
configuration basis is materialized on demand.  The fast transforms use
numpy's FFT; `dft_direct` is the O(N^2) reference they are tested against.

Closure and delta diagnostics integrate over one period with a uniform grid
of G >= 2N points, which is exact for the bandlimited integrands involved
(the grid sum aliases only frequencies that are multiples of G, and none
below 2N-1 occur).  Identities are stated per unit update interval, so the
quadratures divide by tau; with the default tau = 1 nothing changes.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .config import Config, DEFAULT_CONFIG
from .dynamics import Orbit
from .errors import (
    BandwidthMismatchError,
    LengthMismatchError,
    OrbitMismatchError,
    TooLargeError,
    WrongBasisError,
)
from .kernel import periodic_sinc, periodic_sinc_shifted

CONFIGURATION = "configuration"
ENERGY = "energy"

MAX_SPECTRAL_STATES = 4096  # densest matrices we are willing to materialize


@dataclass(frozen=True, eq=False)
class QuantumState:
    """Amplitude vector over one orbit, tagged with its basis.

    `period` is the recurrence time of the orbit the state lives on; when
    None, time-dependent operations fall back to num_states * config.tau.
    """

    amplitudes: np.ndarray
    basis: str
    orbit_id: int | None = None
    period: float | None = None

    def __post_init__(self) -> None:
        if self.basis not in (CONFIGURATION, ENERGY):
            raise WrongBasisError(f"unknown basis {self.basis!r}")
        amp = np.asarray(self.amplitudes, dtype=np.complex128)
        if amp.ndim != 1 or amp.size < 1:
            raise ValueError("amplitudes must be a nonempty 1-d vector")
        if not np.all(np.isfinite(amp)):
            raise ValueError("amplitudes must be finite")
        amp.setflags(write=False)
        object.__setattr__(self, "amplitudes", amp)

    @property
    def num_states(self) -> int:
        return int(self.amplitudes.size)

    def norm(self) -> float:
        return float(np.sqrt(np.sum(np.abs(self.amplitudes) ** 2)))


@dataclass(frozen=True, eq=False)
class Spectrum:
    """Energy levels of one orbit: E_m = (m [+ 1/2]) * h / period."""

    energies: np.ndarray
    period: float
    h: float
    zero_point: bool
    orbit_id: int | None = None

    def __post_init__(self) -> None:
        energies = np.asarray(self.energies, dtype=float)
        energies.setflags(write=False)
        object.__setattr__(self, "energies", energies)

    @property
    def num_states(self) -> int:
        return int(self.energies.size)


def energy_spectrum(
    orbit: Orbit, config: Config = DEFAULT_CONFIG, zero_point: bool = False
) -> Spectrum:
    """Uniformly spaced levels m*h/T over the orbit's period T = N*tau.

    The period comes from the orbit itself (its own step time), config only
    supplies the action quantum h.
    """
    levels = np.arange(orbit.length, dtype=float)
    if zero_point:
        levels = levels + 0.5
    return Spectrum(
        energies=levels * (config.h / orbit.period),
        period=orbit.period,
        h=config.h,
        zero_point=zero_point,
        orbit_id=orbit.orbit_id,
    )


def config_basis_state(orbit: Orbit, n: int) -> QuantumState:
    """The classical state at orbit position n, as a quantum state."""
    if not 0 <= n < orbit.length:
        raise IndexError(f"position {n} outside 0..{orbit.length - 1}")
    amp = np.zeros(orbit.length, dtype=np.complex128)
    amp[n] = 1.0
    return QuantumState(amp, CONFIGURATION, orbit_id=orbit.orbit_id,
                        period=orbit.period)


def dft_direct(values: np.ndarray, inverse: bool = False) -> np.ndarray:
    """O(N^2) discrete Fourier transform, numpy-fft normalization.

    Reference path: the fast transforms must agree with this to 1e-10.
    """
    values = np.asarray(values, dtype=np.complex128)
    n = values.size
    sign = 2j if inverse else -2j
    grid = np.arange(n)
    matrix = np.exp(sign * np.pi * np.outer(grid, grid) / n)
    out = matrix @ values
    if inverse:
        out /= n
    return out


def to_energy_basis(state: QuantumState) -> QuantumState:
    """Configuration -> energy amplitudes; WrongBasisError if already energy."""
    if state.basis != CONFIGURATION:
        raise WrongBasisError("state is not in the configuration basis")
    n = state.num_states
    amp = np.fft.fft(state.amplitudes) / np.sqrt(n)
    return QuantumState(amp, ENERGY, orbit_id=state.orbit_id, period=state.period)


def to_config_basis(state: QuantumState) -> QuantumState:
    """Energy -> configuration amplitudes; WrongBasisError if already there."""
    if state.basis != ENERGY:
        raise WrongBasisError("state is not in the energy basis")
    n = state.num_states
    amp = np.fft.ifft(state.amplitudes) * np.sqrt(n)
    return QuantumState(amp, CONFIGURATION, orbit_id=state.orbit_id,
                        period=state.period)


def as_basis(state: QuantumState, basis: str) -> QuantumState:
    """Return the state expressed in `basis`, converting only if needed."""
    if state.basis == basis:
        return state
    return to_energy_basis(state) if basis == ENERGY else to_config_basis(state)


def _check_compatible(a: QuantumState, b: QuantumState) -> None:
    if a.num_states != b.num_states:
        raise LengthMismatchError(
            f"states live on different sizes ({a.num_states} vs {b.num_states})"
        )
    if a.orbit_id is not None and b.orbit_id is not None and a.orbit_id != b.orbit_id:
        raise OrbitMismatchError(f"orbit {a.orbit_id} vs orbit {b.orbit_id}")


def inner_product(a: QuantumState, b: QuantumState) -> complex:
    """<a|b> = sum conj(a_i) b_i, computed in a's basis."""
    _check_compatible(a, b)
    b = as_basis(b, a.basis)
    return complex(np.vdot(a.amplitudes, b.amplitudes))


def fidelity(a: QuantumState, b: QuantumState) -> float:
    """|<a|b>|, basis- and global-phase-insensitive overlap."""
    return abs(inner_product(a, b))


def evolve(
    state: QuantumState,
    t: float,
    config: Config = DEFAULT_CONFIG,
    zero_point: bool = False,
) -> QuantumState:
    """Evolve by time t; returns a state in the same basis as the input.

    Energy amplitude m picks up exp(-2 pi i t m / (N tau)); after t = tau the
    configuration amplitudes are those of the next classical state.  The
    zero-point flag adds the global phase exp(-i pi t / (N tau)).
    """
    original_basis = state.basis
    energy = as_basis(state, ENERGY)
    n = energy.num_states
    period = state.period if state.period is not None else n * config.tau
    m = np.arange(n)
    phases = np.exp(-2j * np.pi * t * m / period)
    if zero_point:
        phases = phases * np.exp(-1j * np.pi * t / period)
    out = QuantumState(energy.amplitudes * phases, ENERGY,
                       orbit_id=state.orbit_id, period=state.period)
    return as_basis(out, original_basis)


def unit_step(orbit: Orbit) -> np.ndarray:
    """The one-update unitary on the orbit, built from the spectrum.

    Column n is evolve(|n>, tau) in the configuration basis; up to rounding it
    is the cyclic shift |n> -> |n+1 mod N|.
    """
    n = orbit.length
    if n > MAX_SPECTRAL_STATES:
        raise TooLargeError(f"unit_step capped at {MAX_SPECTRAL_STATES} states, got {n}")
    phases = np.exp(-2j * np.pi * np.arange(n) / n)
    spectra_side = np.fft.fft(np.eye(n), axis=0) * phases[:, None]
    return np.fft.ifft(spectra_side, axis=0)


def interpolate_config(orbit: Orbit, t: float) -> np.ndarray:
    """Configuration amplitudes of the evolved initial state at any real t.

    Entry n is S(N, n - t/tau) with the orbit's own step time tau: a Kronecker
    delta when t is a whole number of steps, and the bandlimited interpolation
    between classical states otherwise.  Always unit norm.
    """
    n = orbit.length
    return periodic_sinc(n, np.arange(n) - t / orbit.tau)


def reconstruct(samples, t: float, k: int = 0, tau: float = 1.0) -> complex:
    """Value at time t of the bandlimited function through the given samples.

    samples[n] is the value at t = n*tau; the function is periodic with
    period N*tau and bandlimited to frequencies k .. k+N-1 over that period:

        f(t) = sum_n samples[n] * S_k(N, t/tau - n)
    """
    samples = np.asarray(samples, dtype=np.complex128)
    n = samples.size
    if n < 1:
        raise LengthMismatchError("need at least one sample")
    weights = periodic_sinc_shifted(n, t / tau - np.arange(n), k)
    return complex(np.sum(samples * weights))


@dataclass(frozen=True, eq=False)
class BandlimitedFunction:
    """f(t) = sum_j coefficients[j] * exp(2 pi i (lowest_index + j) t / period)."""

    coefficients: np.ndarray
    period: float
    lowest_index: int = 0

    def __post_init__(self) -> None:
        coeff = np.asarray(self.coefficients, dtype=np.complex128)
        coeff.setflags(write=False)
        object.__setattr__(self, "coefficients", coeff)
        if coeff.ndim != 1 or coeff.size < 1:
            raise ValueError("need a nonempty coefficient vector")
        if self.period <= 0:
            raise ValueError("period must be positive")

    @property
    def num_modes(self) -> int:
        return int(self.coefficients.size)

    def evaluate(self, t):
        """Evaluate the Fourier series at scalar or array t."""
        t_arr = np.atleast_1d(np.asarray(t, dtype=float))
        modes = self.lowest_index + np.arange(self.num_modes)
        phases = np.exp(2j * np.pi * np.outer(t_arr, modes) / self.period)
        values = phases @ self.coefficients
        if np.isscalar(t) or np.ndim(t) == 0:
            return complex(values[0])
        return values

    def samples(self) -> np.ndarray:
        """Values at the N uniform sample times n * period / N."""
        step = self.period / self.num_modes
        return self.evaluate(np.arange(self.num_modes) * step)


def random_bandlimited(
    rng: np.random.Generator, num_modes: int, lowest_index: int = 0,
    period: float | None = None,
) -> BandlimitedFunction:
    """Random unit-power bandlimited function (seeded, for tests and verify)."""
    coeff = rng.standard_normal(num_modes) + 1j * rng.standard_normal(num_modes)
    coeff /= np.sqrt(np.sum(np.abs(coeff) ** 2))
    return BandlimitedFunction(
        coeff, period=float(period if period is not None else num_modes),
        lowest_index=lowest_index,
    )


def bandlimited_product_sum(f_samples, g_samples) -> complex:
    """(1/N) * sum_n f(n tau) g(n tau)  (plain product, no conjugation).

    Equals the period-average (1/T) * integral of f*g when the product's band
    contains no nonzero multiple of N, e.g. for f and g whose lowest mode
    indices sum to 1-N (a band and its conjugate band).
    """
    f = np.asarray(f_samples, dtype=np.complex128)
    g = np.asarray(g_samples, dtype=np.complex128)
    if f.size != g.size:
        raise LengthMismatchError(f"sample counts differ ({f.size} vs {g.size})")
    if f.size < 1:
        raise LengthMismatchError("need at least one sample")
    return complex(np.sum(f * g) / f.size)


def closure_defect(orbit: Orbit, grid_points: int) -> float:
    """Max deviation of the time-averaged projector sum from the identity.

    (T/G) * sum_j |t_j><t_j| over one period equals tau times the identity
    exactly; the grid must satisfy G >= 2N so the quadrature is exact for the
    bandlimited integrand.  Returns the max absolute entry of the difference
    after dividing out tau.
    """
    n = orbit.length
    if n > MAX_SPECTRAL_STATES:
        raise TooLargeError(f"closure capped at {MAX_SPECTRAL_STATES} states, got {n}")
    if grid_points < 2 * n:
        raise ValueError(f"grid must have at least 2N = {2 * n} points")
    times = np.arange(grid_points) * (orbit.period / grid_points)
    rows = np.stack([interpolate_config(orbit, t) for t in times])
    accumulated = np.einsum("jn,jm->nm", rows, rows.conj())
    accumulated *= orbit.period / (grid_points * orbit.tau)
    return float(np.max(np.abs(accumulated - np.eye(n))))


def dirac_defect(
    orbit: Orbit,
    f: BandlimitedFunction,
    t_prime: float,
    grid_points: int | None = None,
) -> float:
    """How far integrating f against <t'|t> lands from f(t').

    The overlap <t'|t> = S(N, (t'-t)/tau) acts as a delta function on
    functions in the orbit's own band: lowest mode 0, N modes, period T.
    Any other band raises BandwidthMismatchError (the identity itself fails
    there).  Quadrature uses a uniform grid of G >= 2N points (default 4N),
    exact for this integrand; the integral carries a factor tau that is
    divided out.
    """
    n = orbit.length
    if f.num_modes != n or f.lowest_index != 0:
        raise BandwidthMismatchError(
            f"need {n} modes starting at 0, got {f.num_modes} at {f.lowest_index}"
        )
    if not np.isclose(f.period, orbit.period, rtol=1e-12, atol=0.0):
        raise BandwidthMismatchError(
            f"period {f.period} does not match orbit period {orbit.period}"
        )
    if grid_points is None:
        grid_points = 4 * n
    if grid_points < 2 * n:
        raise ValueError(f"grid must have at least 2N = {2 * n} points")
    times = np.arange(grid_points) * (orbit.period / grid_points)
    overlaps = periodic_sinc(n, (t_prime - times) / orbit.tau)
    integral = np.sum(f.evaluate(times) * overlaps) * orbit.period / grid_points
    return float(abs(integral / orbit.tau - f.evaluate(t_prime)))


def state_to_jsonable(state: QuantumState) -> dict:
    """JSON form: {"orbit": id, "basis": .., "re": [..], "im": [..]}."""
    return {
        "orbit": None if state.orbit_id is None else int(state.orbit_id),
        "basis": state.basis,
        "re": [float(v) for v in state.amplitudes.real],
        "im": [float(v) for v in state.amplitudes.imag],
    }


def state_from_jsonable(data: dict) -> QuantumState:
    """Inverse of state_to_jsonable; ValueError on malformed input."""
    try:
        re = np.asarray(data["re"], dtype=float)
        im = np.asarray(data["im"], dtype=float)
        basis = data["basis"]
    except (KeyError, TypeError) as exc:
        raise ValueError(f"malformed state JSON: {exc}") from exc
    if re.shape != im.shape:
        raise LengthMismatchError("re and im have different lengths")
    orbit_id = data.get("orbit")
    return QuantumState(re + 1j * im, basis,
                        orbit_id=None if orbit_id is None else int(orbit_id))
