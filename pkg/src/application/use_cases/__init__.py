"""Application use cases package."""
from application.use_cases.use_cases import (
    # check-iso
    CheckIsoUseCase,
    CheckIsoResult,
    # pressure
    RecoverPressureUseCase,
    PressureResult,
    # mms
    MmsConvergenceUseCase,
    MmsResult,
    mms_grid,
)

from application.use_cases.iso_checks import (
    CHECK_NAMES,
    CheckOutcome,
    evaluate_operator,
    safe_evaluate,
    structured_operators,
    riesz_identity_check,
    projector_checks,
    aggregate,
)

__all__ = [
    "CheckIsoUseCase",
    "CheckIsoResult",
    "RecoverPressureUseCase",
    "PressureResult",
    "MmsConvergenceUseCase",
    "MmsResult",
    "mms_grid",
    # Check suite
    "CHECK_NAMES",
    "CheckOutcome",
    "evaluate_operator",
    "safe_evaluate",
    "structured_operators",
    "riesz_identity_check",
    "projector_checks",
    "aggregate",
]
