"""Value objects for the domain layer."""
from domain.value_objects.tolerances import (
    DEFAULT_TOL,
    MACHINE_EPS,
    relative_threshold,
    condition_aware,
    relative_error,
)
from domain.value_objects.rng import (
    rng_for,
    gaussian_matrix,
    unit_vector,
)
from domain.value_objects.flag_parsing import (
    parse_dims,
    parse_int_list,
    parse_int_triple,
    parse_float_triple,
    is_strictly_increasing,
)

__all__ = [
    "DEFAULT_TOL",
    "MACHINE_EPS",
    "relative_threshold",
    "condition_aware",
    "relative_error",
    "rng_for",
    "gaussian_matrix",
    "unit_vector",
    "parse_dims",
    "parse_int_list",
    "parse_int_triple",
    "parse_float_triple",
    "is_strictly_increasing",
]
