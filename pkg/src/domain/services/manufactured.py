"""Manufactured pressure fields with analytic forcing, for convergence runs."""
from dataclasses import dataclass

import numpy as np

from domain.entities import Grid, ManufacturedCase, ScalarField, VectorField
from domain.exceptions import InvalidInputError


@dataclass(frozen=True, eq=False)
class ManufacturedSolution:
    case: ManufacturedCase
    pressure: ScalarField   # exact p at cell centers, discrete mean removed
    force: VectorField      # G = -grad p at face centers


def _mesh(grid: Grid, axis_points):
    """Broadcast per-axis coordinates (x, y, z) to the (z, y, x) array layout."""
    x, y, z = axis_points
    return np.meshgrid(z, y, x, indexing="ij")[::-1]


def manufactured(grid: Grid, case: ManufacturedCase) -> ManufacturedSolution:
    """
    p = prod over the case's axes of cos(pi * coord / length), which has zero
    mean on the box, and its exact negative gradient on faces.

    Raises:
        InvalidInputError: the case varies along an axis the grid does not resolve
    """
    case = ManufacturedCase(case)
    if case.axes > grid.dimension:
        raise InvalidInputError(f"case {case.value} needs a {case.axes}D grid, got {grid.dimension}D")

    lengths = grid.lengths
    centers = [grid.cell_centers(a) for a in range(3)]

    def factors(points, axis):
        # cos factor per axis; axes outside the case contribute 1
        return np.cos(np.pi * points / lengths[axis]) if axis < case.axes else np.ones_like(points)

    X, Y, Z = _mesh(grid, [factors(centers[a], a) for a in range(3)])
    p = X * Y * Z
    p = p - np.mean(p)

    components = []
    for axis in range(3):
        shape = grid.face_shapes[axis]
        if axis >= case.axes:
            components.append(np.zeros(shape))
            continue
        faces = grid.face_positions(axis)
        parts = [factors(centers[a], a) for a in range(3)]
        # sin vanishes on the box faces
        derivative = (np.pi / lengths[axis]) * np.sin(np.pi * faces / lengths[axis])
        derivative[[0, -1]] = 0.0
        parts[axis] = derivative
        A, B, C = _mesh(grid, parts)
        components.append(A * B * C)

    return ManufacturedSolution(
        case=case,
        pressure=ScalarField(grid, p),
        force=VectorField(grid, *components),
    )
