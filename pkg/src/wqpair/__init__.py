"""Exact diagonalization of one- and two-excitation states of an atom array
coupled to a waveguide.

The package builds the effective non-Hermitian Hamiltonian of an
equidistant array of two-level atoms whose interactions are mediated by
guided photons, diagonalizes it in the single- and two-excitation sectors,
and provides the surrounding analysis: photon-photon distance and state
taxonomy, the complex-orthogonal decomposition of two-photon
wavefunctions, momentum-space maps, the polariton dispersion with its
Fabry-Perot quantization and Lambert-W superradiance law, and seeded
disorder ensembles.
"""

__version__ = "0.1.0"

from .errors import (
    CertificationError,
    ConfigurationError,
    DimensionCapError,
    PoleError,
)
from .lattice import (
    ArrayConfig,
    PairBasis,
    build_pair_hamiltonian,
    build_single_hamiltonian,
    check_complex_symmetric,
    oracle_full_space,
)
from .observables import (
    ClassifierThresholds,
    SpectrumRecord,
    TwoExcitationState,
    center_of_mass_ipr,
    classify,
    default_edge_width,
    distance_histogram,
    edge_mass,
    pair_mirror_permutation,
    parity_of,
    photon_distance,
    spectrum_records,
    symmetrize_degenerate_pairs,
)
from .spectral import (
    EigenDecomposition,
    OrthogonalSymmetricDecomposition,
    check_dimension,
    decompose_symmetric,
    eig_dense,
    fourier2d,
    fourier_grid,
    inverse_fourier2d,
    truncate_decomposition,
)
from .analytics import (
    DispersionPoint,
    ScalingRow,
    brightest_decay_prediction,
    dispersion_K,
    dispersion_eps,
    edge_center_ratio,
    edge_center_scaling,
    fabry_perot_residual,
    lambert_w0,
    reflection_r,
)
from .ensemble import (
    DisorderSweepResult,
    SizeSweepResult,
    SweepRow,
    build_manifest,
    disorder_sweep,
    draw_disorder,
    pair_distance_profile,
    realization_seed,
    size_sweep,
)

__all__ = [
    "__version__",
    "ArrayConfig",
    "CertificationError",
    "ClassifierThresholds",
    "ConfigurationError",
    "DimensionCapError",
    "DispersionPoint",
    "DisorderSweepResult",
    "EigenDecomposition",
    "OrthogonalSymmetricDecomposition",
    "PairBasis",
    "PoleError",
    "ScalingRow",
    "SizeSweepResult",
    "SpectrumRecord",
    "SweepRow",
    "TwoExcitationState",
    "brightest_decay_prediction",
    "build_manifest",
    "build_pair_hamiltonian",
    "build_single_hamiltonian",
    "center_of_mass_ipr",
    "check_complex_symmetric",
    "check_dimension",
    "classify",
    "decompose_symmetric",
    "default_edge_width",
    "disorder_sweep",
    "dispersion_K",
    "dispersion_eps",
    "distance_histogram",
    "draw_disorder",
    "edge_center_ratio",
    "edge_center_scaling",
    "edge_mass",
    "eig_dense",
    "fabry_perot_residual",
    "fourier2d",
    "fourier_grid",
    "inverse_fourier2d",
    "lambert_w0",
    "oracle_full_space",
    "pair_distance_profile",
    "pair_mirror_permutation",
    "parity_of",
    "photon_distance",
    "realization_seed",
    "size_sweep",
    "spectrum_records",
    "symmetrize_degenerate_pairs",
    "truncate_decomposition",
]
