"""Operator bases, generalized depolarizing channels and their complete-positivity geometry."""
from .basis import (
    OperatorBasis,
    change_of_basis_matrix,
    conjugate_pair_structure,
    gellmann_basis,
    hw_basis,
    named_basis,
    pauli_basis,
    validate_basis,
)
from .channel import (
    ChoiMatrix,
    CompressionVector,
    PolarizationVector,
    TranslationVector,
    apply_depolarizing,
    apply_translation_channel,
    choi_of_conjugation,
    choi_of_depolarizing,
    choi_of_translation_channel,
    density_from_polarization,
    extract_compression_vector,
    polarization_from_density,
)
from .config import TOL, Tolerances
from .geometry import (
    CpReport,
    SimplexReport,
    certify_cp,
    certify_cp_translation,
    extremal_vertices,
    gellmann_k_block,
    gellmann_pm_lambdas,
    hw_lambdas,
    pauli_lambdas,
    sign_criterion,
    simplex_condition,
    unitary_basis_lambdas,
)
from .linalg import charpoly_coeffs, hermitian_eigensystem
from .sampling import sample_region

__version__ = "0.1.0"
