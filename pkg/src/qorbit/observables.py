"""Energy, momentum and width diagnostics.

Average energy of a configuration state on an orbit of N distinct states and
period T is h(N-1)/(2T); with the zero-point offset switched on it becomes
h N/(2T) = h/(2 tau), half the action quantum per update interval, the same
for every orbit.

The moving-particle picture reads one hop of the cyclic shift as motion by a
lattice spacing lambda at speed v; the interpolated amplitude around the
classical trajectory is S(N, (x - v t)/lambda) and the associated momentum is
h/(2 lambda).

Width reports compare a state's occupied bandwidth and first-moment width
against the two lower bounds that orbit dynamics implies: (N-1)/T from
passing through N mutually orthogonal states in time T, and 1/(2 tau_min)
from a pair of states tau_min apart.

The second moment of the position distribution |S|^2 is computed on the
large-N limit profile (sinc), where it grows as N/(2 pi^2); the finite-N
kernel's own second moment exceeds that asymptote by a constant factor
2 ln 2 because the tails near the half-period still carry weight.  A fixed
unit-height gaussian exp(-pi u^2), variance 1/(2 pi), serves as the
comparator for the central-lobe figure.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .config import Config, DEFAULT_CONFIG
from .errors import EmptySupportError, LengthMismatchError, OrbitMismatchError
from .kernel import periodic_sinc, sinc_limit
from .spectral import ENERGY, QuantumState, Spectrum, as_basis

SUPPORT_EPS = 1e-24  # |amplitude|^2 below this counts as unoccupied
BOUND_SLACK = 1e-10  # nonnegativity tolerance for the width bounds


def _energy_amplitudes(state: QuantumState, spectrum: Spectrum) -> np.ndarray:
    if state.num_states != spectrum.num_states:
        raise LengthMismatchError(
            f"state has {state.num_states} amplitudes, spectrum "
            f"{spectrum.num_states} levels"
        )
    if (
        state.orbit_id is not None
        and spectrum.orbit_id is not None
        and state.orbit_id != spectrum.orbit_id
    ):
        raise OrbitMismatchError(
            f"state orbit {state.orbit_id} vs spectrum orbit {spectrum.orbit_id}"
        )
    return as_basis(state, ENERGY).amplitudes


def average_energy(state: QuantumState, spectrum: Spectrum) -> float:
    """<H> = sum_m |a_m|^2 E_m (state converted to the energy basis)."""
    amp = _energy_amplitudes(state, spectrum)
    return float(np.sum(np.abs(amp) ** 2 * spectrum.energies))


@dataclass(frozen=True)
class ParticleModel:
    """One particle hopping around a ring: `sites` positions `spacing` apart,
    advancing one site per update at speed `speed`."""

    sites: int
    spacing: float = 1.0
    speed: float = 1.0

    def __post_init__(self) -> None:
        if self.sites < 1:
            raise ValueError("need at least one site")
        if self.spacing <= 0 or self.speed <= 0:
            raise ValueError("spacing and speed must be positive")

    @property
    def step_time(self) -> float:
        return self.spacing / self.speed

    @property
    def period(self) -> float:
        return self.sites * self.step_time


def particle_amplitude(model: ParticleModel, x: float, t: float):
    """Amplitude at position x, time t: S(N, (x - v t)/spacing).

    Peaks on the classical trajectory x = v t and vanishes at the other
    sites whenever t is a whole number of steps.
    """
    return periodic_sinc(model.sites, (np.asarray(x) - model.speed * t) / model.spacing)


def momentum(model: ParticleModel, config: Config = DEFAULT_CONFIG) -> float:
    """p = h / (2 * spacing): average energy over speed for the hopping state."""
    return config.h / (2.0 * model.spacing)


@dataclass(frozen=True)
class WidthReport:
    """Bandwidth and first-moment width of a state against the orbit bounds."""

    bandwidth: float            # occupied-support width, nu_max - nu_min
    nu_bar: float               # mean frequency <H>/h
    nu_0: float                 # lowest occupied frequency
    first_moment_width: float   # 2 * (nu_bar - nu_0)
    b_min_states: float         # (num_distinct - 1) / period
    b_min_pair: float           # 1 / (2 tau_min), 0 when fewer than two states
    num_distinct: int
    period: float
    meets_state_count_bound: bool
    meets_first_moment_bound: bool

    def to_jsonable(self) -> dict:
        return {
            "bandwidth": self.bandwidth,
            "nu_bar": self.nu_bar,
            "nu_0": self.nu_0,
            "first_moment_width": self.first_moment_width,
            "b_min_states": self.b_min_states,
            "b_min_pair": self.b_min_pair,
            "num_distinct": self.num_distinct,
            "period": self.period,
            "meets_state_count_bound": self.meets_state_count_bound,
            "meets_first_moment_bound": self.meets_first_moment_bound,
        }


def width_report(
    state: QuantumState,
    spectrum: Spectrum,
    num_distinct: int | None = None,
    tau_min: float | None = None,
) -> WidthReport:
    """Measure a state's frequency widths against the orbit lower bounds.

    num_distinct defaults to the orbit length (a configuration state passes
    through that many mutually orthogonal states per period); tau_min
    defaults to the orbit step time.  Raises EmptySupportError for a state
    with no occupied level.
    """
    amp = _energy_amplitudes(state, spectrum)
    weights = np.abs(amp) ** 2
    occupied = np.flatnonzero(weights > SUPPORT_EPS)
    if occupied.size == 0:
        raise EmptySupportError("state occupies no energy level")
    freqs = spectrum.energies / spectrum.h
    nu_occ = freqs[occupied]
    nu_0 = float(nu_occ.min())
    bandwidth = float(nu_occ.max() - nu_0)
    nu_bar = float(np.sum(weights * freqs))
    width = 2.0 * (nu_bar - nu_0)
    n_distinct = int(num_distinct) if num_distinct is not None else state.num_states
    period = spectrum.period
    b_min_states = (n_distinct - 1) / period
    if tau_min is None:
        tau_min = period / spectrum.num_states
    b_min_pair = 1.0 / (2.0 * tau_min) if n_distinct >= 2 else 0.0
    applicable = max(b_min_states, b_min_pair)
    return WidthReport(
        bandwidth=bandwidth,
        nu_bar=nu_bar,
        nu_0=nu_0,
        first_moment_width=width,
        b_min_states=b_min_states,
        b_min_pair=b_min_pair,
        num_distinct=n_distinct,
        period=period,
        meets_state_count_bound=bandwidth >= b_min_states - BOUND_SLACK,
        meets_first_moment_bound=width >= applicable - BOUND_SLACK,
    )


def second_moment(
    n: int, x_bar: float | None = None, grid_points: int | None = None
) -> float:
    """Second moment of the limit position profile over one period of length n.

    integral over [0, n) of (x - x_bar)^2 * |sinc_limit(x - x_bar)|^2 dx,
    by midpoint quadrature on a uniform grid (>= 4n points); approaches
    n / (2 pi^2) and the quadrature reproduces that closely for whole n.
    """
    if n < 1:
        raise ValueError("n must be positive")
    if x_bar is None:
        x_bar = n / 2.0
    if grid_points is None:
        grid_points = 4 * n
    if grid_points < 4 * n:
        raise ValueError(f"grid must have at least 4n = {4 * n} points")
    x = (np.arange(grid_points) + 0.5) * (n / grid_points)
    u = x - x_bar
    values = u**2 * np.abs(sinc_limit(u)) ** 2
    return float(values.sum() * n / grid_points)


def gaussian_comparator(u):
    """The fixed unit-height comparator exp(-pi u^2), variance 1/(2 pi)."""
    return np.exp(-np.pi * np.asarray(u, dtype=float) ** 2)


def gaussian_variance(half_width: float = 8.0, grid_points: int = 200_001) -> float:
    """Numerically integrated variance of the comparator (exact value 1/(2 pi))."""
    u = np.linspace(-half_width, half_width, grid_points)
    w = gaussian_comparator(u)
    return float(np.sum(u**2 * w) / np.sum(w))


def figure_data(n: int, u_range: float = 6.0, samples: int = 1200) -> np.ndarray:
    """Table of (u, |S(n,u)|^2, exp(-pi u^2)) on a symmetric inclusive grid.

    `samples` counts intervals, so the table has samples+1 rows and, for
    grids aligned with whole numbers, contains the integer points exactly.
    """
    if samples < 1:
        raise ValueError("need at least one interval")
    u = np.linspace(-u_range, u_range, samples + 1)
    s2 = np.abs(periodic_sinc(n, u)) ** 2
    return np.column_stack([u, s2, gaussian_comparator(u)])
