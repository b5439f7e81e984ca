"""qorbit: invertible finite-state dynamics as bandlimited quantum evolution.

The pipeline: decompose a permutation of configurations into orbits, give
each orbit of length N the uniformly spaced spectrum m*h/T, and the discrete
dynamics becomes the integer-time restriction of a continuous finite-energy
unitary evolution whose intermediate amplitudes are periodic sinc values.
Oversampling refines an orbit without changing its period; observables cover
average energy, particle momentum and bandwidth-versus-time width bounds.
"""

from .config import Config, DEFAULT_CONFIG
from .dynamics import (
    ClassicalDynamics,
    Orbit,
    OrbitDecomposition,
    decompose_orbits,
    dynamics_from_dict,
    dynamics_to_dict,
    from_particle_shift,
    from_permutation,
    from_two_channel_lga,
    load_dynamics,
    orbit_of,
    step,
)
from .errors import (
    BandwidthMismatchError,
    EmptySupportError,
    LengthMismatchError,
    NoReturnError,
    NotBijectiveError,
    OrbitMismatchError,
    QorbitError,
    TooLargeError,
    WrongBasisError,
)
from .kernel import kernel_direct_sum, periodic_sinc, periodic_sinc_shifted, sinc_limit
from .observables import (
    ParticleModel,
    WidthReport,
    average_energy,
    figure_data,
    gaussian_comparator,
    gaussian_variance,
    momentum,
    particle_amplitude,
    second_moment,
    width_report,
)
from .oversample import (
    OversampledOrbit,
    bandlimited_basis_state,
    bandlimited_evolve,
    extended_spectrum,
    limit_superposition_profile,
    offset_profiles,
    oversample,
    refinement_distance,
    verify_isomorphism,
)
from .output import emit_json, emit_table
from .spectral import (
    CONFIGURATION,
    ENERGY,
    BandlimitedFunction,
    QuantumState,
    Spectrum,
    as_basis,
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
from .verify import Check, run_verify, verify_file

__version__ = "0.1.0"
