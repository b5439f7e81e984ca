"""Command-line front end: dynamics files in, CSV/JSON (and figures) out.

Exit status contract: 0 success (and all checks passed for `verify`),
1 verification failure, 2 usage error, 3 unreadable or invalid input.
"""

from __future__ import annotations

import functools
import sys
from pathlib import Path

import click
import numpy as np

from .config import Config
from .dynamics import decompose_orbits, load_dynamics
from .errors import QorbitError
from .observables import average_energy, figure_data, width_report
from .output import emit_json, emit_table
from .oversample import offset_profiles, oversample, verify_isomorphism
from .spectral import config_basis_state, energy_spectrum, evolve
from .verify import verify_file

INPUT_ERROR = 3
VERIFY_FAILED = 1

POSITIVE = click.FloatRange(min=0, min_open=True)


def handles_input_errors(fn):
    """Turn unreadable files and domain violations into exit status 3."""

    @functools.wraps(fn)
    def wrapper(*args, **kwargs):
        try:
            return fn(*args, **kwargs)
        except (QorbitError, ValueError, OSError, IndexError) as exc:
            click.echo(f"error: {exc}", err=True)
            sys.exit(INPUT_ERROR)

    return wrapper


def _input_option(fn):
    return click.option(
        "--input", "input_path", required=True, type=click.Path(),
        help="dynamics JSON file",
    )(fn)


def _output_option(fn):
    return click.option(
        "--output", "output_path", default=None, type=click.Path(),
        help="write here instead of stdout",
    )(fn)


def _tau_option(fn):
    return click.option(
        "--tau", default=1.0, show_default=True, type=POSITIVE,
        help="time between classical updates",
    )(fn)


def _planck_option(fn):
    return click.option(
        "--planck", default=1.0, show_default=True, type=POSITIVE,
        help="action quantum h",
    )(fn)


def _locate_orbit(dyn, state: int, config: Config):
    decomp = decompose_orbits(dyn, config)
    orbit_id, pos = decomp.locate(state)
    return decomp, decomp.orbits[orbit_id], pos


def _parse_factors(text: str) -> list[int]:
    try:
        factors = [int(part) for part in text.split(",") if part.strip()]
    except ValueError:
        raise click.BadParameter(f"not a comma-separated integer list: {text!r}")
    if not factors or any(m < 1 for m in factors):
        raise click.BadParameter("factors must be positive integers")
    return factors


@click.group()
@click.version_option(package_name="qorbit")
def main():
    """Quantum evolution on the orbits of reversible classical dynamics."""


@main.command()
@_input_option
@_tau_option
@_output_option
@handles_input_errors
def orbits(input_path, tau, output_path):
    """Decompose a dynamics into its orbits (JSON)."""
    dyn = load_dynamics(input_path)
    decomp = decompose_orbits(dyn, Config(tau=tau))
    data = {
        "num_states": dyn.num_states,
        "kind": dyn.kind,
        "tau": tau,
        "num_orbits": len(decomp.orbits),
        "orbits": [
            {
                "id": int(orbit.orbit_id),
                "length": orbit.length,
                "period": orbit.period,
                "members": [int(m) for m in orbit.members],
            }
            for orbit in decomp.orbits
        ],
    }
    emit_json(data, output_path)


@main.command(name="evolve")
@_input_option
@click.option("--state", default=0, show_default=True, type=int,
              help="initial classical state index")
@click.option("--t", "time", required=True, type=float, help="evolution time")
@_tau_option
@_planck_option
@click.option("--zero-point", is_flag=True, help="include the half-quantum offset")
@_output_option
@click.option("--plot", "plot_path", default=None, type=click.Path(),
              help="also render the probabilities as a PNG")
@handles_input_errors
def evolve_cmd(input_path, state, time, tau, planck, zero_point, output_path,
               plot_path):
    """Interpolated amplitudes at one time (CSV: n, re, im, prob)."""
    dyn = load_dynamics(input_path)
    config = Config(tau=tau, h=planck)
    _, orbit, pos = _locate_orbit(dyn, state, config)
    evolved = evolve(config_basis_state(orbit, pos), time, config,
                     zero_point=zero_point)
    amp = evolved.amplitudes
    rows = [
        (n, amp[n].real, amp[n].imag, float(np.abs(amp[n]) ** 2))
        for n in range(orbit.length)
    ]
    emit_table(rows, ["n", "re", "im", "prob"], output_path)
    if plot_path is not None:
        from .plotting import save_probability_figure

        save_probability_figure(
            np.arange(orbit.length), np.abs(amp) ** 2,
            f"orbit {orbit.orbit_id}, t = {time:g}", plot_path,
        )


@main.command()
@_input_option
@click.option("--state", default=0, show_default=True, type=int,
              help="initial classical state index")
@click.option("--t-max", default=None, type=POSITIVE,
              help="sweep end time [default: one period]")
@click.option("--steps", default=64, show_default=True,
              type=click.IntRange(min=1), help="intervals in the time sweep")
@_tau_option
@_planck_option
@click.option("--zero-point", is_flag=True, help="include the half-quantum offset")
@_output_option
@handles_input_errors
def interpolate(input_path, state, t_max, steps, tau, planck, zero_point,
                output_path):
    """Amplitude trajectory on a time grid (CSV: t, n, re, im, prob)."""
    dyn = load_dynamics(input_path)
    config = Config(tau=tau, h=planck)
    _, orbit, pos = _locate_orbit(dyn, state, config)
    start = config_basis_state(orbit, pos)
    end = t_max if t_max is not None else orbit.period
    rows = []
    for j in range(steps + 1):
        t = j * end / steps
        amp = evolve(start, t, config, zero_point=zero_point).amplitudes
        for n in range(orbit.length):
            rows.append(
                (float(t), n, amp[n].real, amp[n].imag,
                 float(np.abs(amp[n]) ** 2))
            )
    emit_table(rows, ["t", "n", "re", "im", "prob"], output_path)


@main.command()
@_input_option
@_tau_option
@_planck_option
@click.option("--zero-point", is_flag=True, help="include the half-quantum offset")
@_output_option
@handles_input_errors
def energy(input_path, tau, planck, zero_point, output_path):
    """Per-orbit spectrum summary and mean energy (JSON)."""
    dyn = load_dynamics(input_path)
    config = Config(tau=tau, h=planck)
    decomp = decompose_orbits(dyn, config)
    entries = []
    for orbit in decomp.orbits:
        spec = energy_spectrum(orbit, config, zero_point=zero_point)
        mean = average_energy(config_basis_state(orbit, 0), spec)
        entries.append({
            "id": int(orbit.orbit_id),
            "length": orbit.length,
            "period": orbit.period,
            "level_spacing": config.h / orbit.period,
            "mean_energy": mean,
            "nu_bar": mean / config.h,
        })
    emit_json(
        {"h": config.h, "tau": config.tau, "zero_point": zero_point,
         "orbits": entries},
        output_path,
    )


@main.command()
@_input_option
@_tau_option
@_planck_option
@_output_option
@handles_input_errors
def uncertainty(input_path, tau, planck, output_path):
    """Width bounds for each orbit's configuration state (JSON)."""
    dyn = load_dynamics(input_path)
    config = Config(tau=tau, h=planck)
    decomp = decompose_orbits(dyn, config)
    entries = []
    for orbit in decomp.orbits:
        spec = energy_spectrum(orbit, config)
        report = width_report(config_basis_state(orbit, 0), spec)
        entries.append({"id": int(orbit.orbit_id), **report.to_jsonable()})
    emit_json({"h": config.h, "tau": config.tau, "orbits": entries}, output_path)


@main.command(name="oversample")
@_input_option
@click.option("--state", default=0, show_default=True, type=int,
              help="classical state selecting the orbit")
@click.option("--factors", default="1,2,4,8", show_default=True,
              help="comma-separated refinement factors")
@click.option("--samples", default=32, show_default=True,
              type=click.IntRange(min=1), help="time-grid intervals per period")
@_tau_option
@_output_option
@handles_input_errors
def oversample_cmd(input_path, state, factors, samples, tau, output_path):
    """Refined-evolution overlap defects against the base kernel
    (CSV: M, t, defect)."""
    factor_list = _parse_factors(factors)
    dyn = load_dynamics(input_path)
    _, orbit, _ = _locate_orbit(dyn, state, Config(tau=tau))
    rows = []
    for m in factor_list:
        ov = oversample(orbit, m)
        for j in range(samples + 1):
            t = j * orbit.period / samples
            rows.append((m, float(t), verify_isomorphism(ov, float(t), 0.0)))
    emit_table(rows, ["M", "t", "defect"], output_path)


@main.command()
@_input_option
@click.option("--state", default=0, show_default=True, type=int,
              help="classical state selecting the orbit")
@click.option("--t", "time", default=0.5, show_default=True, type=float,
              help="snapshot time")
@click.option("--factors", default="1,2,4,8", show_default=True,
              help="comma-separated refinement factors")
@_tau_option
@_output_option
@handles_input_errors
def limit(input_path, state, time, factors, tau, output_path):
    """Offset-class profiles of the refined state (CSV: M, m, n, u, re, im)."""
    factor_list = _parse_factors(factors)
    dyn = load_dynamics(input_path)
    _, orbit, _ = _locate_orbit(dyn, state, Config(tau=tau))
    rows = []
    for m_factor in factor_list:
        profiles = offset_profiles(oversample(orbit, m_factor), time)
        for m_off in range(m_factor):
            u = m_off / m_factor
            for n in range(orbit.length):
                value = profiles[m_off, n]
                rows.append((m_factor, m_off, n, float(u), value.real, value.imag))
    emit_table(rows, ["M", "m", "n", "u", "re", "im"], output_path)


@main.command()
@click.option("--N", "size", default=100, show_default=True,
              type=click.IntRange(min=1), help="kernel size N")
@click.option("--range", "u_range", default=6.0, show_default=True,
              type=POSITIVE, help="half-width of the u grid")
@click.option("--samples", default=1200, show_default=True,
              type=click.IntRange(min=1), help="grid intervals (rows = samples+1)")
@_output_option
@click.option("--plot", "plot_path", default=None, type=click.Path(),
              help="PNG path [default: alongside --output]")
@click.option("--no-plot", is_flag=True, help="emit only the CSV")
@handles_input_errors
def figure(size, u_range, samples, output_path, plot_path, no_plot):
    """Kernel profile against the gaussian (CSV: u, s2, gauss) plus a PNG."""
    table = figure_data(size, u_range, samples)
    rows = [(float(u), float(s2), float(g)) for u, s2, g in table]
    emit_table(rows, ["u", "s2", "gauss"], output_path)
    if no_plot:
        return
    if plot_path is None and output_path is not None:
        plot_path = str(Path(output_path).with_suffix(".png"))
    if plot_path is not None:
        from .plotting import save_kernel_figure

        save_kernel_figure(table, size, plot_path)


@main.command()
@_input_option
@_tau_option
@_planck_option
@click.option("--seed", default=42, show_default=True, type=int,
              help="seed for the randomized checks")
@click.option("--tolerance-abs", default=1e-9, show_default=True, type=POSITIVE,
              help="absolute tolerance recorded in the report")
@click.option("--tolerance-rel", default=1e-10, show_default=True, type=POSITIVE,
              help="relative tolerance recorded in the report")
@_output_option
def verify(input_path, tau, planck, seed, tolerance_abs, tolerance_rel,
           output_path):
    """Measure every library invariant on a dynamics (JSON report).

    Exits 0 when every check passes, 1 otherwise.
    """
    config = Config(tau=tau, h=planck, tolerance_abs=tolerance_abs,
                    tolerance_rel=tolerance_rel, rng_seed=seed)
    try:
        report = verify_file(input_path, config)
    except (QorbitError, ValueError, OSError) as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(INPUT_ERROR)
    emit_json(report, output_path)
    if not report["all_passed"]:
        sys.exit(VERIFY_FAILED)


if __name__ == "__main__":
    main()
