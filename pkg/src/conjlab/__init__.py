"""conjlab: non-local structure of conjugation symmetries.

Magic-basis spectra and local-unitary classification of two-qubit
conjugations, Prod/Sep-measurability certificates for multipartite
conjugations, minimum-entanglement eigenframes, and conjugation-protected
QCRB-saturating measurements for sensor networks.
"""

__version__ = "1.0.0"

from .errors import (
    ConfigError,
    ConjlabError,
    DimensionError,
    FrameError,
    SpectrumError,
    SymmetryError,
)
from .linalg import (
    DEFAULT_TOL,
    TakagiResult,
    Tolerances,
    dagger,
    haar_unitary,
    kron_all,
    matrix_exp_i_hermitian,
    partial_trace_keep,
    permute_subsystems,
    random_real_orthogonal,
    random_symmetric_unitary,
    subsystem_permutation_matrix,
    takagi,
)
from .conjugation import (
    Antiunitary,
    Conjugation,
    Frame,
    WignerForm,
    anticommutator_defect,
    build_named,
    candidate_conjugation,
    collective_spin_flip,
    conjugate_swap,
    conjugation_invariance_defect,
    cz_conjugation,
    is_eigenframe,
    is_eigenvector,
    is_product_vector,
    is_spin_flip_sum,
    oneway_conjugation,
    product_conjugation,
    product_factors,
    real_subspace_basis,
    spin_flip,
    wigner_canonical_form,
)
from .twoqubit import (
    MagicSpectrum,
    TwoQubitClass,
    average_concurrence,
    canonical_local_unitaries,
    classify,
    concurrence,
    ejm_conjugation,
    ejm_frame,
    entanglement_entropy,
    hadamard_eigenframe,
    lu_equivalent,
    magic_matrix,
    magic_representation,
    magic_spectrum,
    min_average_concurrence,
    spectra_equivalent,
    stiefel_eigenframe,
    tetrahedron_directions,
)
from .measurability import (
    MeasurabilityReport,
    prod_eigenbasis_search,
    sep_witness_check,
    total_normality,
)
from .metrology import (
    AntiparallelModel,
    FisherMatrices,
    POVM,
    PureStateModel,
    antiparallel_model,
    anticommutation_certificate,
    classical_fisher,
    collective_generator,
    fisher_matrices,
    ghz_state,
    is_imaginarity_free,
    magic_frame,
    magnetometry_conjugation,
    magnetometry_model,
    magnetometry_network_conjugation,
    product_protected_frame,
    protected_frame,
    qcrb_saturation_gap,
    quantum_fisher_pure,
    superposed_ghz,
)
from .invariants import CheckResult, available_checks, run_checks

__all__ = [
    "__version__",
    # errors
    "ConjlabError", "DimensionError", "SymmetryError", "FrameError",
    "SpectrumError", "ConfigError",
    # linear algebra
    "Tolerances", "DEFAULT_TOL", "TakagiResult", "takagi", "dagger",
    "kron_all", "partial_trace_keep", "permute_subsystems",
    "subsystem_permutation_matrix", "matrix_exp_i_hermitian", "haar_unitary",
    "random_symmetric_unitary", "random_real_orthogonal",
    # conjugations
    "Antiunitary", "Conjugation", "Frame", "WignerForm", "build_named",
    "is_eigenvector", "is_eigenframe", "real_subspace_basis", "spin_flip",
    "collective_spin_flip", "conjugate_swap", "cz_conjugation",
    "product_conjugation", "product_factors", "is_product_vector",
    "candidate_conjugation", "oneway_conjugation", "wigner_canonical_form",
    "is_spin_flip_sum", "anticommutator_defect", "conjugation_invariance_defect",
    # two-qubit structure
    "MagicSpectrum", "TwoQubitClass", "magic_matrix", "magic_representation",
    "magic_spectrum", "spectra_equivalent", "lu_equivalent",
    "canonical_local_unitaries", "classify", "concurrence",
    "entanglement_entropy", "min_average_concurrence", "average_concurrence",
    "hadamard_eigenframe", "stiefel_eigenframe", "ejm_conjugation", "ejm_frame",
    "tetrahedron_directions",
    # measurability
    "MeasurabilityReport", "total_normality", "prod_eigenbasis_search",
    "sep_witness_check",
    # metrology
    "PureStateModel", "POVM", "FisherMatrices", "classical_fisher",
    "quantum_fisher_pure", "fisher_matrices", "qcrb_saturation_gap",
    "is_imaginarity_free", "collective_generator", "ghz_state",
    "superposed_ghz", "magnetometry_model", "magnetometry_conjugation",
    "magnetometry_network_conjugation", "protected_frame",
    "product_protected_frame", "magic_frame", "anticommutation_certificate",
    "AntiparallelModel", "antiparallel_model",
    # invariants
    "CheckResult", "run_checks", "available_checks",
]
