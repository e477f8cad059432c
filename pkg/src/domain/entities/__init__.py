"""Domain entities package."""
from domain.entities.models import (
    Operator,
    SubspaceBasis,
    Functional,
    CosetVector,
    Grid,
    ScalarField,
    VectorField,
    ManufacturedCase,
    FieldKind,
    SolverPath,
    as_real_array,
)
from domain.entities.reports import (
    RunConfig,
    CheckRecord,
    MmsRow,
    MmsTable,
    SuiteMetadata,
    Report,
)

__all__ = [
    "Operator",
    "SubspaceBasis",
    "Functional",
    "CosetVector",
    "Grid",
    "ScalarField",
    "VectorField",
    "ManufacturedCase",
    "FieldKind",
    "SolverPath",
    "as_real_array",
    "RunConfig",
    "CheckRecord",
    "MmsRow",
    "MmsTable",
    "SuiteMetadata",
    "Report",
]
