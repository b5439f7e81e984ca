"""Shared run settings.

A single small value object carries the scale constants (update interval tau,
action quantum h), the tolerances used by validation, and the seed for every
randomized check, so that identical inputs always reproduce identical output.
"""

from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class Config:
    """Global settings for dynamics, spectra and verification runs."""

    tau: float = 1.0          # time per update step
    h: float = 1.0            # action quantum; energy unit is h / period
    tolerance_abs: float = 1e-9
    tolerance_rel: float = 1e-10
    rng_seed: int = 42

    def __post_init__(self) -> None:
        if self.tau <= 0:
            raise ValueError(f"tau must be positive, got {self.tau}")
        if self.h <= 0:
            raise ValueError(f"h must be positive, got {self.h}")
        if self.tolerance_abs <= 0 or self.tolerance_rel <= 0:
            raise ValueError("tolerances must be positive")


DEFAULT_CONFIG = Config()
