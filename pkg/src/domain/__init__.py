"""Domain layer package."""
from domain.entities import (
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
    RunConfig,
    Report,
)
from domain.repositories import (
    IFieldRepository,
    IReportRepository,
)

__all__ = [
    # Entities
    "Operator",
    "SubspaceBasis",
    "Functional",
    "CosetVector",
    "Grid",
    "ScalarField",
    "VectorField",
    "RunConfig",
    "Report",
    # Enums
    "ManufacturedCase",
    "FieldKind",
    "SolverPath",
    # Repositories
    "IFieldRepository",
    "IReportRepository",
]
