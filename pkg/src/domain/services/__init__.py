"""Numerical services: linear algebra, isomorphisms, pressure equation."""
from domain.services.operator_core import (
    SingularDecomposition,
    decompose,
    singular_values,
    operator_norm,
    nullspace_basis,
    image_basis,
    rank,
    ortho_projector,
    project,
    distance_to_span,
    complement_basis,
    largest_principal_angle,
    min_norm_least_squares,
    pseudo_inverse_apply,
)
from domain.services.riesz_iso import (
    IsoContext,
    MembershipResult,
    InverseResult,
    FredholmReport,
    ProjectorCaseReport,
    apply_iso_tilde,
    dual_iso_tilde,
    conullspace_contains,
    invert_iso_tilde,
    invert_iso_tilde_with_oracle,
    iso_tilde_norm,
    coset_norm,
    canonical_representative,
    apply_coset_map,
    apply_composite,
    coset_map_norm,
    composite_norm,
    injectivity_bound,
    duality_map,
    fredholm_report,
    projector_special_case,
)
from domain.services.pressure_field import (
    DivergenceSystem,
    ZeroMeanReport,
    PressureSolution,
    HelmholtzSplit,
    build_divergence,
    apply_divergence,
    discrete_gradient,
    weighted_mean,
    weighted_inner_product,
    l2_error,
    check_image_is_zero_mean,
    gradient_functional,
    check_helmholtz_membership,
    recover_pressure,
    helmholtz_split,
    continuity_constant,
    resolve_path,
)
from domain.services.manufactured import ManufacturedSolution, manufactured

__all__ = [
    # Operator core
    "SingularDecomposition",
    "decompose",
    "singular_values",
    "operator_norm",
    "nullspace_basis",
    "image_basis",
    "rank",
    "ortho_projector",
    "project",
    "distance_to_span",
    "complement_basis",
    "largest_principal_angle",
    "min_norm_least_squares",
    "pseudo_inverse_apply",
    # Isomorphisms
    "IsoContext",
    "MembershipResult",
    "InverseResult",
    "FredholmReport",
    "ProjectorCaseReport",
    "apply_iso_tilde",
    "dual_iso_tilde",
    "conullspace_contains",
    "invert_iso_tilde",
    "invert_iso_tilde_with_oracle",
    "iso_tilde_norm",
    "coset_norm",
    "canonical_representative",
    "apply_coset_map",
    "apply_composite",
    "coset_map_norm",
    "composite_norm",
    "injectivity_bound",
    "duality_map",
    "fredholm_report",
    "projector_special_case",
    # Pressure field
    "DivergenceSystem",
    "ZeroMeanReport",
    "PressureSolution",
    "HelmholtzSplit",
    "build_divergence",
    "apply_divergence",
    "discrete_gradient",
    "weighted_mean",
    "weighted_inner_product",
    "l2_error",
    "check_image_is_zero_mean",
    "gradient_functional",
    "check_helmholtz_membership",
    "recover_pressure",
    "helmholtz_split",
    "continuity_constant",
    "resolve_path",
    "ManufacturedSolution",
    "manufactured",
]
