"""Algebraic solution of the relativistic Coulomb bound-state problem.

The bound spectrum and radial wavefunctions of a single electron in a
Coulomb field are generated by su(1,1) ladder operators acting on a
weighted polynomial family, entirely in exact arithmetic over Q(s) and its
quadratic tower; floating point appears only in final embeddings and in
the independent numeric checks.
"""

from .params import (
    Channel,
    DomainError,
    PhysicalParams,
    SpectralPoint,
    make_channel,
    make_params,
    mu_from_energy,
    nonrelativistic_limit_table,
    spectral_point,
)
from .qsfield import QsNumber, QsPolynomial, TowerNumber, sturm_positive_roots
from .algebra import (
    FamilyFunction,
    FamilySum,
    GaussQs,
    ScaledFamilyFunction,
    apply_casimir,
    apply_xi3,
    apply_xi_minus,
    apply_xi_plus,
    commutator_check,
    inner_product,
)
from .ladder import (
    LadderState,
    RepresentationBoundaryError,
    build_state,
    ground_state,
    ladder_coefficient,
    lower_state,
    raise_state,
)
from .wavefunctions import (
    LaguerreReport,
    RadialPair,
    assemble,
    count_f_nodes,
    laguerre_cross_check,
    laguerre_poly,
    normalize,
    sample,
    write_csv,
)
from .verify import (
    BracketingError,
    OracleResult,
    ResidualReport,
    first_order_residual,
    orthonormality_matrix,
    second_order_residual,
    shooting_oracle,
    verification_report,
)
from .jloperator import (
    DiagonalityRecord,
    JLMatrix,
    diagonality_scan,
    jl_fg_matrix,
    jl_psi_action,
    spectroscopic_label,
)

__version__ = "0.1.0"

__all__ = [
    "Channel", "DomainError", "PhysicalParams", "SpectralPoint",
    "make_channel", "make_params", "mu_from_energy",
    "nonrelativistic_limit_table", "spectral_point",
    "QsNumber", "QsPolynomial", "TowerNumber", "sturm_positive_roots",
    "FamilyFunction", "FamilySum", "GaussQs", "ScaledFamilyFunction",
    "apply_casimir", "apply_xi3", "apply_xi_minus", "apply_xi_plus",
    "commutator_check", "inner_product",
    "LadderState", "RepresentationBoundaryError", "build_state",
    "ground_state", "ladder_coefficient", "lower_state", "raise_state",
    "LaguerreReport", "RadialPair", "assemble", "count_f_nodes",
    "laguerre_cross_check", "laguerre_poly", "normalize", "sample",
    "write_csv",
    "BracketingError", "OracleResult", "ResidualReport",
    "first_order_residual", "orthonormality_matrix",
    "second_order_residual", "shooting_oracle", "verification_report",
    "DiagonalityRecord", "JLMatrix", "diagonality_scan", "jl_fg_matrix",
    "jl_psi_action", "spectroscopic_label",
    "__version__",
]
