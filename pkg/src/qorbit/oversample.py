"""Finer-grained dynamics with the same period: M states per original step.

Oversampling an orbit of length N by a factor M inserts M-1 intermediate
states between consecutive classical states: the extended orbit has M*N
states, step time tau/M, and the original period T = N*tau.  Its spectrum is
m*h/T for m = 0..M*N-1, so the lowest N levels coincide with the base orbit's.

States supported only on those lowest N levels ("bandlimited" states) evolve
exactly like the base system: in the extended configuration basis, labeling
position k by the time k/M it represents, the evolved state at time t has
amplitude S(N, k/M - t/tau) / sqrt(M) at position k, and all inner products
between such states match the base orbit's values at every finite M.

Offset classes: grouping positions k = n*M + m by the fractional offset m/M
splits the extended basis into M copies of the base grid; each class carries
total probability 1/M, and the per-class amplitude profile (scaled by
sqrt(M)) samples one and the same continuum limit function.  Profiles are
returned as views of the state vector (pure reindexing, no arithmetic).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .config import Config, DEFAULT_CONFIG
from .dynamics import Orbit
from .errors import TooLargeError
from .kernel import periodic_sinc
from .spectral import (
    CONFIGURATION,
    ENERGY,
    MAX_SPECTRAL_STATES,
    QuantumState,
    Spectrum,
    energy_spectrum,
    inner_product,
    to_config_basis,
)


@dataclass(frozen=True, eq=False)
class OversampledOrbit:
    """A base orbit together with its M-fold refinement."""

    base: Orbit
    factor: int

    def __post_init__(self) -> None:
        if self.factor < 1:
            raise ValueError(f"factor must be >= 1, got {self.factor}")
        if self.factor * self.base.length > MAX_SPECTRAL_STATES:
            raise TooLargeError(
                f"extended orbit capped at {MAX_SPECTRAL_STATES} states, got "
                f"{self.factor * self.base.length}"
            )

    @property
    def extended_length(self) -> int:
        return self.factor * self.base.length

    @property
    def period(self) -> float:
        return self.base.period

    @property
    def extended_orbit(self) -> Orbit:
        """The refined orbit: M*N synthetic positions, step time tau/M."""
        return Orbit(
            np.arange(self.extended_length, dtype=np.int64),
            tau=self.base.tau / self.factor,
            orbit_id=self.base.orbit_id,
        )


def oversample(orbit: Orbit, factor: int) -> OversampledOrbit:
    """Refine an orbit by an integer factor, keeping its period fixed."""
    return OversampledOrbit(base=orbit, factor=factor)


def extended_spectrum(
    ov: OversampledOrbit, config: Config = DEFAULT_CONFIG, zero_point: bool = False
) -> Spectrum:
    """Spectrum of the refined dynamics: m*h/T for m = 0..M*N-1."""
    return energy_spectrum(ov.extended_orbit, config, zero_point=zero_point)


def bandlimited_basis_state(ov: OversampledOrbit, n: int) -> QuantumState:
    """The base classical state n embedded in the refined system.

    Built through the energy route: equal-weight support on the lowest N of
    the M*N levels with the base configuration phases, then transformed to
    the extended configuration basis.  Equivalent to kernel amplitudes
    S(N, k/M - n)/sqrt(M), which tests check independently.
    """
    n_base = ov.base.length
    if not 0 <= n < n_base:
        raise IndexError(f"position {n} outside 0..{n_base - 1}")
    amp = np.zeros(ov.extended_length, dtype=np.complex128)
    m = np.arange(n_base)
    amp[:n_base] = np.exp(-2j * np.pi * n * m / n_base) / np.sqrt(n_base)
    state = QuantumState(amp, ENERGY, orbit_id=ov.base.orbit_id, period=ov.period)
    return to_config_basis(state)


def bandlimited_evolve(ov: OversampledOrbit, t: float) -> QuantumState:
    """The bandlimited initial state evolved to arbitrary real time t.

    Amplitude at extended position k (time label k/M steps) is
    S(N, k/M - t/tau) / sqrt(M); at integer t this reproduces the classical
    state within each offset class.
    """
    n_base = ov.base.length
    m = ov.factor
    labels = np.arange(ov.extended_length) / m
    amp = periodic_sinc(n_base, labels - t / ov.base.tau) / np.sqrt(m)
    return QuantumState(amp, CONFIGURATION, orbit_id=ov.base.orbit_id,
                        period=ov.period)


def verify_isomorphism(ov: OversampledOrbit, t: float, t_prime: float) -> float:
    """|<psi(t')|psi(t)> - S(N, (t'-t)/tau)| for the bandlimited evolution.

    Zero (to rounding) at every finite M: restricted to the lowest N levels,
    the refined system's overlaps are exactly the base orbit's.
    """
    left = bandlimited_evolve(ov, t_prime)
    right = bandlimited_evolve(ov, t)
    expected = periodic_sinc(ov.base.length, (t_prime - t) / ov.base.tau)
    return float(abs(inner_product(left, right) - expected))


def offset_profiles(ov: OversampledOrbit, t: float) -> np.ndarray:
    """Per-offset amplitude profiles of the evolved bandlimited state.

    Returns shape (M, N): row m is sqrt(M) times the amplitudes at positions
    {n + m/M}, obtained by reshaping the state vector (bitwise-identical
    summands, no rearithmetic).
    """
    state = bandlimited_evolve(ov, t)
    grouped = state.amplitudes.reshape(ov.base.length, ov.factor).T
    return grouped * np.sqrt(ov.factor)


def limit_superposition_profile(
    orbit: Orbit, factors, t: float
) -> dict[int, np.ndarray]:
    """Offset profiles for a sequence of refinement factors at one time.

    Every profile samples the same continuum function S(N, n + u - t/tau) on
    the offset grid u = m/M; finer factors refine the grid.
    """
    return {int(m): offset_profiles(oversample(orbit, int(m)), t) for m in factors}


def refinement_distance(coarse: np.ndarray, fine: np.ndarray) -> float:
    """Sup distance between a profile and its refinement.

    Both profiles sample one continuum function at positions k/M around the
    period ring; each fine sample is compared against the nearest coarse
    sample (wrapping around the ring), so the distance is the modulus of
    continuity at the coarse grid scale and shrinks as refinement deepens.
    Requires the fine factor to be a multiple of the coarse one.
    """
    m_coarse, m_fine = coarse.shape[0], fine.shape[0]
    if m_fine % m_coarse != 0 or coarse.shape[1] != fine.shape[1]:
        raise ValueError("fine profile must refine the coarse one")
    flat_coarse = coarse.T.reshape(-1)  # position order: index k at k/M
    flat_fine = fine.T.reshape(-1)
    k = np.arange(flat_fine.size)
    nearest = np.round(k * m_coarse / m_fine).astype(int) % flat_coarse.size
    return float(np.max(np.abs(flat_fine - flat_coarse[nearest])))
