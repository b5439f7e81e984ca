"""Invertible finite-state dynamics and their orbit structure.

A dynamics is a permutation of {0, .., num_states-1}: one update maps state n
to image[n].  Because the map is invertible, the state space splits into
disjoint cycles ("orbits"); everything downstream (spectra, evolution) is
built per orbit.

Canonical orbit labeling, pinned here so serialized output is reproducible:
  * each orbit is listed starting from its smallest member (c_0 = min),
    following the dynamics forward;
  * orbits are sorted by that smallest member and numbered 0, 1, 2, ..;
  * a lazily extracted single orbit (orbit_of) has the same member order but
    carries orbit_id None, since numbering needs the full decomposition.

Builders: an explicit permutation, the one-particle cyclic shift, and a
two-channel wrap-around lattice gas (right/left movers on a ring, optional
head-on reflection).  Lattice-gas encoding: two bits per site, the right-mover
occupancy at bit 2*site and the left-mover occupancy at bit 2*site+1.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .config import Config, DEFAULT_CONFIG
from .errors import NoReturnError, NotBijectiveError, QorbitError, TooLargeError

MAX_ORBIT_STATES = 10**6   # decomposition cap
MAX_LGA_SITES = 12         # 4**12 states is the largest gas we materialize


@dataclass(frozen=True, eq=False)
class ClassicalDynamics:
    """A permutation on num_states configurations, plus its origin."""

    num_states: int
    image: np.ndarray
    kind: str = "permutation"
    params: dict = field(default_factory=dict)

    def __post_init__(self) -> None:
        image = np.asarray(self.image, dtype=np.int64)
        if image.ndim != 1 or image.size != self.num_states:
            raise NotBijectiveError(
                f"image must be a flat array of length {self.num_states}"
            )
        if self.num_states < 1:
            raise NotBijectiveError("dynamics needs at least one state")
        if image.size and (image.min() < 0 or image.max() >= self.num_states):
            raise NotBijectiveError("image values out of range")
        if np.bincount(image, minlength=self.num_states).max(initial=1) != 1:
            raise NotBijectiveError("image has repeated values (not a permutation)")
        image.setflags(write=False)
        object.__setattr__(self, "image", image)

    @cached_property
    def inverse(self) -> np.ndarray:
        inv = np.argsort(self.image)
        inv.setflags(write=False)
        return inv


def from_permutation(image) -> ClassicalDynamics:
    """Wrap an explicit image list/array; raises NotBijectiveError if invalid."""
    image = np.asarray(image, dtype=np.int64)
    return ClassicalDynamics(num_states=int(image.size), image=image)


def from_particle_shift(sites: int) -> ClassicalDynamics:
    """One particle hopping one site per step around a ring: n -> n+1 mod sites."""
    if sites < 1:
        raise ValueError(f"need at least one site, got {sites}")
    image = (np.arange(sites, dtype=np.int64) + 1) % sites
    return ClassicalDynamics(sites, image, kind="shift", params={"sites": sites})


def from_two_channel_lga(sites: int, reflect: bool = False) -> ClassicalDynamics:
    """Two-channel lattice gas on a ring of `sites` sites (4**sites states).

    Each update advects right movers one site in +x and left movers one site
    in -x; with reflect=True, any site then holding exactly one particle swaps
    that particle's channel.  Both stages are invertible, so the composite is
    a permutation.
    """
    if sites < 1:
        raise ValueError(f"need at least one site, got {sites}")
    if sites > MAX_LGA_SITES:
        raise TooLargeError(f"lattice gas capped at {MAX_LGA_SITES} sites, got {sites}")
    n = 4**sites
    states = np.arange(n, dtype=np.int64)
    advected = np.zeros_like(states)
    for site in range(sites):
        right_from = 2 * ((site - 1) % sites)
        left_from = 2 * ((site + 1) % sites) + 1
        advected |= ((states >> right_from) & 1) << (2 * site)
        advected |= ((states >> left_from) & 1) << (2 * site + 1)
    if reflect:
        for site in range(sites):
            r = (advected >> (2 * site)) & 1
            l = (advected >> (2 * site + 1)) & 1
            # exactly one particle at the site: flip both bits = swap channels
            advected ^= ((r ^ l) * 3) << (2 * site)
    return ClassicalDynamics(
        n, advected, kind="lga", params={"sites": sites, "reflect": bool(reflect)}
    )


def step(dyn: ClassicalDynamics, state: int, count: int = 1) -> int:
    """Apply the update `count` times (negative count steps backward)."""
    if not 0 <= state < dyn.num_states:
        raise IndexError(f"state {state} outside 0..{dyn.num_states - 1}")
    if abs(count) > dyn.num_states:
        length = _cycle_length(dyn, state)
        count %= length  # safe: count mod cycle length is equivalent
    table = dyn.image if count >= 0 else dyn.inverse
    current = state
    for _ in range(abs(count)):
        current = int(table[current])
    return current


def _cycle_length(dyn: ClassicalDynamics, start: int) -> int:
    length = 1
    current = int(dyn.image[start])
    while current != start:
        current = int(dyn.image[current])
        length += 1
        if length > dyn.num_states:
            raise NoReturnError(f"walk from {start} did not close")
    return length


@dataclass(frozen=True, eq=False)
class Orbit:
    """One cycle of the dynamics, listed forward from its smallest member."""

    members: np.ndarray
    tau: float = 1.0
    orbit_id: int | None = None

    def __post_init__(self) -> None:
        members = np.asarray(self.members, dtype=np.int64)
        members.setflags(write=False)
        object.__setattr__(self, "members", members)
        if members.size < 1:
            raise QorbitError("orbit cannot be empty")
        if self.tau <= 0:
            raise ValueError("tau must be positive")

    @property
    def length(self) -> int:
        return int(self.members.size)

    @property
    def period(self) -> float:
        return self.length * self.tau


@dataclass(frozen=True, eq=False)
class OrbitDecomposition:
    """All orbits of a dynamics plus constant-time state -> orbit lookup."""

    orbits: list[Orbit]
    orbit_index: np.ndarray   # state -> orbit_id
    position: np.ndarray      # state -> index along its orbit
    tau: float

    @property
    def num_states(self) -> int:
        return int(self.orbit_index.size)

    def locate(self, state: int) -> tuple[int, int]:
        """Return (orbit_id, position along orbit) for a state index."""
        if not 0 <= state < self.num_states:
            raise IndexError(f"state {state} outside 0..{self.num_states - 1}")
        return int(self.orbit_index[state]), int(self.position[state])

    def to_jsonable(self) -> dict:
        return {
            "orbits": [
                {"id": int(i), "members": [int(m) for m in orbit.members]}
                for i, orbit in enumerate(self.orbits)
            ]
        }


def decompose_orbits(
    dyn: ClassicalDynamics, config: Config = DEFAULT_CONFIG
) -> OrbitDecomposition:
    """Split the state space into its orbits, canonically labeled.

    Scanning starts in ascending order guarantees each cycle is first entered
    at its smallest member, so the canonical labeling falls out of the walk.
    """
    n = dyn.num_states
    if n > MAX_ORBIT_STATES:
        raise TooLargeError(f"decomposition capped at {MAX_ORBIT_STATES} states, got {n}")
    image = dyn.image
    orbit_index = np.full(n, -1, dtype=np.int64)
    position = np.zeros(n, dtype=np.int64)
    orbits: list[Orbit] = []
    for start in range(n):
        if orbit_index[start] >= 0:
            continue
        members = [start]
        orbit_index[start] = len(orbits)
        current = int(image[start])
        while current != start:
            if orbit_index[current] >= 0:
                raise NoReturnError(f"walk from {start} ran into another cycle")
            orbit_index[current] = len(orbits)
            position[current] = len(members)
            members.append(current)
            current = int(image[current])
        orbits.append(
            Orbit(np.array(members, dtype=np.int64), tau=config.tau,
                  orbit_id=len(orbits))
        )
    orbit_index.setflags(write=False)
    position.setflags(write=False)
    return OrbitDecomposition(orbits, orbit_index, position, tau=config.tau)


def orbit_of(
    dyn: ClassicalDynamics, start: int, config: Config = DEFAULT_CONFIG
) -> Orbit:
    """Extract just the cycle containing `start`, canonically ordered.

    Lazy alternative to decompose_orbits for large spaces; member order is
    identical to the full decomposition, orbit_id is None (numbering would
    need the other orbits).
    """
    if not 0 <= start < dyn.num_states:
        raise IndexError(f"state {start} outside 0..{dyn.num_states - 1}")
    members = [start]
    current = int(dyn.image[start])
    while current != start:
        members.append(current)
        current = int(dyn.image[current])
        if len(members) > dyn.num_states:
            raise NoReturnError(f"walk from {start} did not close")
    cycle = np.array(members, dtype=np.int64)
    cycle = np.roll(cycle, -int(np.argmin(cycle)))
    return Orbit(cycle, tau=config.tau, orbit_id=None)


def dynamics_from_dict(data: dict) -> ClassicalDynamics:
    """Build a dynamics from its JSON form.

    Accepted shapes:
      {"type": "permutation", "image": [..]}
      {"type": "shift", "sites": N}
      {"type": "lga", "sites": s, "reflect": bool}
    """
    if not isinstance(data, dict) or "type" not in data:
        raise ValueError("dynamics JSON must be an object with a 'type' key")
    kind = data["type"]
    if kind == "permutation":
        if "image" not in data:
            raise ValueError("permutation dynamics needs an 'image' list")
        return from_permutation(data["image"])
    if kind == "shift":
        if "sites" not in data:
            raise ValueError("shift dynamics needs 'sites'")
        return from_particle_shift(int(data["sites"]))
    if kind == "lga":
        if "sites" not in data:
            raise ValueError("lga dynamics needs 'sites'")
        return from_two_channel_lga(int(data["sites"]), bool(data.get("reflect", False)))
    raise ValueError(f"unknown dynamics type {kind!r}")


def dynamics_to_dict(dyn: ClassicalDynamics) -> dict:
    """Serialize a dynamics; builders round-trip through their parameters."""
    if dyn.kind == "shift":
        return {"type": "shift", "sites": int(dyn.params["sites"])}
    if dyn.kind == "lga":
        return {
            "type": "lga",
            "sites": int(dyn.params["sites"]),
            "reflect": bool(dyn.params["reflect"]),
        }
    return {"type": "permutation", "image": [int(v) for v in dyn.image]}


def load_dynamics(path: str) -> ClassicalDynamics:
    """Read a dynamics JSON file; ValueError on malformed content."""
    with open(path, encoding="utf-8") as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ValueError(f"invalid JSON in {path}: {exc}") from exc
    return dynamics_from_dict(data)
