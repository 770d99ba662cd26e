"""Majorana-sphere simulations of adiabatic and superadiabatic passage in qutrits."""

from .drive import (
    DriveConfig,
    HamiltonianSample,
    adiabaticity_ratio,
    envelopes,
    h_cd_ideal,
    h_sastirap,
    h_stirap,
    h_twophoton,
    hamiltonian,
    mixing_angle,
    r_frame_check,
    stark_phases,
)
from .dynamics import (
    DecoherenceRates,
    DensityMatrix,
    TrajectoryRecord,
    evolve_lindblad,
    evolve_pure,
    pair_stars,
)
from .errors import (
    BasisMismatchError,
    ConfigError,
    IntegrationInstabilityError,
    MajsphereError,
    PositivityWarning,
    TomographyConditioningError,
)
from .majorana import (
    MajoranaConstellation,
    MajoranaPolynomial,
    MajoranaStar,
    QutritState,
    SpinVector,
    bright_states,
    concurrence,
    dark_fidelity,
    dark_state,
    intermediate_population_geometric,
    j_operator_on_polynomial,
    separation,
    spin_average,
    spin_average_geometric,
    stars_of,
    state_of,
    symmetrized_qubits,
    to_polynomial,
)
from .mixedrep import (
    MixedTrajectory,
    SpectralTriple,
    WeightedConstellation,
    decompose,
    mixed_spin_average,
    mixed_trajectory,
)
from .tomography import (
    ProcessComparison,
    ProcessMatrix,
    compare,
    input_basis,
    process_matrix_from_io,
    run_process,
)

__version__ = "0.1.0"
