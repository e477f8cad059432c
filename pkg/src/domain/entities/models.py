"""
Domain entities for the image/conullspace isomorphism and the staggered-grid
pressure equation.

All arrays are 64-bit real numpy arrays, copied on construction and marked
read-only, so every entity is immutable and safe to share across threads.
Flat orderings are row-major with x fastest (arrays are stored (z, y, x)).
"""
from dataclasses import dataclass
from enum import Enum
from typing import List, Tuple

import numpy as np

from domain.exceptions import (
    ComplexScalarError,
    DimensionMismatchError,
    InvalidGridError,
    InvalidInputError,
)


ORTHONORMAL_ATOL = 1e-12


class ManufacturedCase(str, Enum):
    """Manufactured pressure p = prod cos(pi * coord / length) over the listed axes."""
    COS_X = "cosX"
    COS_X_COS_Y = "cosXcosY"
    COS_X_COS_Y_COS_Z = "cosXcosYcosZ"

    @property
    def axes(self) -> int:
        """Number of axes the manufactured pressure varies along."""
        return {
            ManufacturedCase.COS_X: 1,
            ManufacturedCase.COS_X_COS_Y: 2,
            ManufacturedCase.COS_X_COS_Y_COS_Z: 3,
        }[self]


class FieldKind(str, Enum):
    """Kind tag of a field file."""
    SCALAR = "scalar"
    VECTOR = "vector"


class SolverPath(str, Enum):
    """Pressure solver selection."""
    AUTO = "auto"
    DENSE = "dense"    # SVD / inverse isomorphism, the oracle
    CG = "cg"          # conjugate gradient on the zero-mean subspace


def as_real_array(values, name: str = "array", ndim: int = 1) -> np.ndarray:
    """
    Convert input to a read-only float64 array, rejecting complex or
    non-finite data.

    Raises:
        ComplexScalarError: complex dtype
        InvalidInputError: wrong dimensionality or NaN/Inf entries
    """
    arr = np.asarray(values)
    if np.iscomplexobj(arr):
        raise ComplexScalarError(f"{name} must be real; complex scalars break linearity of (h|A)")
    try:
        arr = np.array(arr, dtype=np.float64)
    except (TypeError, ValueError) as e:
        raise InvalidInputError(f"{name} is not numeric: {e}") from e
    if arr.ndim != ndim:
        raise InvalidInputError(f"{name} must be {ndim}-dimensional, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise InvalidInputError(f"{name} has non-finite entries")
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class Operator:
    """
    Dense real matrix A : R^cols -> R^rows.
    Also used for the transpose A^tr, projectors and the divergence matrix.
    """
    entries: np.ndarray

    def __post_init__(self):
        entries = as_real_array(self.entries, "operator entries", ndim=2)
        if entries.shape[0] < 1 or entries.shape[1] < 1:
            raise InvalidInputError(f"operator needs positive dimensions, got {entries.shape}")
        object.__setattr__(self, "entries", entries)

    @classmethod
    def create(cls, entries) -> "Operator":
        """Factory accepting nested lists or arrays."""
        return cls(entries=entries)

    @classmethod
    def from_row_major(cls, rows: int, cols: int, values) -> "Operator":
        """Build from a flat row-major list of length rows*cols."""
        flat = as_real_array(values, "operator entries")
        if flat.size != rows * cols:
            raise DimensionMismatchError(f"expected {rows * cols} entries, got {flat.size}")
        return cls(entries=flat.reshape(rows, cols))

    @classmethod
    def identity(cls, n: int) -> "Operator":
        return cls(entries=np.eye(n))

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "Operator":
        return cls(entries=np.zeros((rows, cols)))

    @property
    def rows(self) -> int:
        return self.entries.shape[0]

    @property
    def cols(self) -> int:
        return self.entries.shape[1]

    @property
    def shape(self) -> Tuple[int, int]:
        return self.entries.shape

    def transpose(self) -> "Operator":
        return Operator(entries=self.entries.T)

    def apply(self, x) -> np.ndarray:
        """Return A x, checking that x lives in the domain."""
        vec = as_real_array(x, "vector")
        if vec.size != self.cols:
            raise DimensionMismatchError(f"vector has dimension {vec.size}, operator domain is {self.cols}")
        return self.entries @ vec

    def apply_transpose(self, y) -> np.ndarray:
        """Return A^T y, checking that y lives in the codomain."""
        vec = as_real_array(y, "vector")
        if vec.size != self.rows:
            raise DimensionMismatchError(f"vector has dimension {vec.size}, operator codomain is {self.rows}")
        return self.entries.T @ vec

    def row_major(self) -> List[float]:
        return self.entries.ravel().tolist()


@dataclass(frozen=True, eq=False)
class SubspaceBasis:
    """
    Orthonormal spanning set of a subspace of R^ambient_dim, stored as the
    columns of `vectors`. `tol_used` is the rank threshold that produced it.
    """
    ambient_dim: int
    vectors: np.ndarray
    tol_used: float = 0.0

    def __post_init__(self):
        if self.ambient_dim < 1:
            raise InvalidInputError("ambient dimension must be positive")
        vectors = np.array(self.vectors, dtype=np.float64).reshape(self.ambient_dim, -1)
        vectors = as_real_array(vectors, "basis vectors", ndim=2)
        k = vectors.shape[1]
        if k > self.ambient_dim:
            raise InvalidInputError(f"{k} vectors cannot be independent in dimension {self.ambient_dim}")
        if k:
            gram_error = np.max(np.abs(vectors.T @ vectors - np.eye(k)))
            if gram_error > ORTHONORMAL_ATOL:
                raise InvalidInputError(f"basis is not orthonormal (Gram error {gram_error:.3e})")
        object.__setattr__(self, "vectors", vectors)

    @classmethod
    def from_vectors(cls, ambient_dim: int, vectors: List, tol_used: float = 0.0) -> "SubspaceBasis":
        """Factory from a list of coordinate vectors (already orthonormal)."""
        if not vectors:
            return cls.empty(ambient_dim, tol_used)
        return cls(ambient_dim, np.column_stack([np.asarray(v, dtype=np.float64) for v in vectors]), tol_used)

    @classmethod
    def empty(cls, ambient_dim: int, tol_used: float = 0.0) -> "SubspaceBasis":
        return cls(ambient_dim, np.zeros((ambient_dim, 0)), tol_used)

    @classmethod
    def standard(cls, ambient_dim: int, tol_used: float = 0.0) -> "SubspaceBasis":
        return cls(ambient_dim, np.eye(ambient_dim), tol_used)

    @property
    def dim(self) -> int:
        return self.vectors.shape[1]

    def vector_list(self) -> List[np.ndarray]:
        return [self.vectors[:, i] for i in range(self.dim)]


@dataclass(frozen=True, eq=False)
class Functional:
    """
    Element of the dual space X*, in the standard dual basis.
    The dual norm is the Euclidean norm of `coords`.
    """
    coords: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "coords", as_real_array(self.coords, "functional coords"))

    @property
    def dim(self) -> int:
        return self.coords.size

    def norm(self) -> float:
        return float(np.linalg.norm(self.coords))

    def __call__(self, x) -> float:
        vec = as_real_array(x, "vector")
        if vec.size != self.dim:
            raise DimensionMismatchError(f"functional of dimension {self.dim} applied to vector of dimension {vec.size}")
        return float(self.coords @ vec)


@dataclass(frozen=True, eq=False)
class CosetVector:
    """Coset x + N(A), kept as a representative plus the nullspace basis."""
    representative: np.ndarray
    nullspace: SubspaceBasis

    def __post_init__(self):
        rep = as_real_array(self.representative, "coset representative")
        if rep.size != self.nullspace.ambient_dim:
            raise DimensionMismatchError(
                f"representative has dimension {rep.size}, nullspace lives in {self.nullspace.ambient_dim}"
            )
        object.__setattr__(self, "representative", rep)

    def shifted(self, n) -> "CosetVector":
        """Same coset with representative moved by n (caller guarantees n in N(A))."""
        return CosetVector(self.representative + as_real_array(n, "shift"), self.nullspace)


@dataclass(frozen=True)
class Grid:
    """
    MAC staggered grid on the box [0,lx]x[0,ly]x[0,lz].
    Pressure lives at cell centers, velocity components on cell faces.
    1D and 2D grids are the ny = nz = 1 (resp. nz = 1) cases.
    """
    nx: int
    ny: int = 1
    nz: int = 1
    lx: float = 1.0
    ly: float = 1.0
    lz: float = 1.0

    def __post_init__(self):
        for name in ("nx", "ny", "nz"):
            value = getattr(self, name)
            if int(value) != value or value < 1:
                raise InvalidGridError(f"{name} must be a positive integer, got {value}")
        for name in ("lx", "ly", "lz"):
            value = getattr(self, name)
            if not np.isfinite(value) or value <= 0:
                raise InvalidGridError(f"{name} must be a positive length, got {value}")
        if self.nx * self.ny * self.nz < 2:
            raise InvalidGridError("grid needs at least two cells for zero-mean pressure to be nontrivial")

    @classmethod
    def create(cls, counts: Tuple[int, int, int], lengths: Tuple[float, float, float] = (1.0, 1.0, 1.0)) -> "Grid":
        """Factory from (nx, ny, nz) and (lx, ly, lz)."""
        nx, ny, nz = counts
        lx, ly, lz = lengths
        return cls(nx=int(nx), ny=int(ny), nz=int(nz), lx=float(lx), ly=float(ly), lz=float(lz))

    @property
    def counts(self) -> Tuple[int, int, int]:
        return (self.nx, self.ny, self.nz)

    @property
    def lengths(self) -> Tuple[float, float, float]:
        return (self.lx, self.ly, self.lz)

    @property
    def spacing(self) -> Tuple[float, float, float]:
        return (self.lx / self.nx, self.ly / self.ny, self.lz / self.nz)

    @property
    def hx(self) -> float:
        return self.lx / self.nx

    @property
    def hy(self) -> float:
        return self.ly / self.ny

    @property
    def hz(self) -> float:
        return self.lz / self.nz

    @property
    def cell_volume(self) -> float:
        return self.hx * self.hy * self.hz

    @property
    def n_cells(self) -> int:
        return self.nx * self.ny * self.nz

    @property
    def dimension(self) -> int:
        """Number of leading axes that carry more than one cell."""
        if self.nz > 1:
            return 3
        if self.ny > 1:
            return 2
        return 1

    @property
    def cell_shape(self) -> Tuple[int, int, int]:
        return (self.nz, self.ny, self.nx)

    @property
    def face_shapes(self) -> Tuple[Tuple[int, int, int], ...]:
        """Array shapes of the u (x-face), v (y-face) and w (z-face) components."""
        return (
            (self.nz, self.ny, self.nx + 1),
            (self.nz, self.ny + 1, self.nx),
            (self.nz + 1, self.ny, self.nx),
        )

    @property
    def n_interior_faces(self) -> int:
        return (
            (self.nx - 1) * self.ny * self.nz
            + self.nx * (self.ny - 1) * self.nz
            + self.nx * self.ny * (self.nz - 1)
        )

    def cell_centers(self, axis: int) -> np.ndarray:
        """Cell-center coordinates along axis 0 (x), 1 (y) or 2 (z)."""
        n = self.counts[axis]
        h = self.spacing[axis]
        return (np.arange(n) + 0.5) * h

    def face_positions(self, axis: int) -> np.ndarray:
        """Face coordinates (including both boundary faces) along an axis."""
        n = self.counts[axis]
        return np.arange(n + 1) * self.spacing[axis]

    def to_dict(self) -> dict:
        return {"nx": self.nx, "ny": self.ny, "nz": self.nz, "lx": self.lx, "ly": self.ly, "lz": self.lz}


@dataclass(frozen=True, eq=False)
class ScalarField:
    """Cell-centered scalar (pressure) values, array shape (nz, ny, nx)."""
    grid: Grid
    values: np.ndarray

    def __post_init__(self):
        flat = as_real_array(np.asarray(self.values).ravel(), "scalar field")
        if flat.size != self.grid.n_cells:
            raise DimensionMismatchError(f"scalar field needs {self.grid.n_cells} values, got {flat.size}")
        values = flat.reshape(self.grid.cell_shape)
        values.setflags(write=False)
        object.__setattr__(self, "values", values)

    @classmethod
    def zeros(cls, grid: Grid) -> "ScalarField":
        return cls(grid, np.zeros(grid.cell_shape))

    def flat(self) -> np.ndarray:
        """Values in row-major cell order (x fastest)."""
        return self.values.ravel()


@dataclass(frozen=True, eq=False)
class VectorField:
    """
    Face-centered vector field: u on x-faces, v on y-faces, w on z-faces.
    Boundary faces are stored too; velocity fields keep them at 0.
    """
    grid: Grid
    u: np.ndarray
    v: np.ndarray
    w: np.ndarray

    def __post_init__(self):
        for name, shape in zip(("u", "v", "w"), self.grid.face_shapes):
            flat = as_real_array(np.asarray(getattr(self, name)).ravel(), f"component {name}")
            if flat.size != int(np.prod(shape)):
                raise DimensionMismatchError(
                    f"component {name} needs {int(np.prod(shape))} face values, got {flat.size}"
                )
            component = flat.reshape(shape)
            component.setflags(write=False)
            object.__setattr__(self, name, component)

    @classmethod
    def zeros(cls, grid: Grid) -> "VectorField":
        u_shape, v_shape, w_shape = grid.face_shapes
        return cls(grid, np.zeros(u_shape), np.zeros(v_shape), np.zeros(w_shape))

    @classmethod
    def from_interior(cls, grid: Grid, coords) -> "VectorField":
        """Inverse of `interior()`: boundary faces are set to 0."""
        coords = as_real_array(coords, "interior face values")
        if coords.size != grid.n_interior_faces:
            raise DimensionMismatchError(f"expected {grid.n_interior_faces} interior faces, got {coords.size}")
        u_shape, v_shape, w_shape = grid.face_shapes
        u, v, w = np.zeros(u_shape), np.zeros(v_shape), np.zeros(w_shape)
        nu = (grid.nx - 1) * grid.ny * grid.nz
        nv = grid.nx * (grid.ny - 1) * grid.nz
        u[:, :, 1:-1] = coords[:nu].reshape(grid.nz, grid.ny, grid.nx - 1)
        v[:, 1:-1, :] = coords[nu:nu + nv].reshape(grid.nz, grid.ny - 1, grid.nx)
        w[1:-1, :, :] = coords[nu + nv:].reshape(grid.nz - 1, grid.ny, grid.nx)
        return cls(grid, u, v, w)

    def components(self) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
        return (self.u, self.v, self.w)

    def interior(self) -> np.ndarray:
        """Interior-face values, u block then v block then w block, each x fastest."""
        return np.concatenate([
            self.u[:, :, 1:-1].ravel(),
            self.v[:, 1:-1, :].ravel(),
            self.w[1:-1, :, :].ravel(),
        ])

    def boundary_max_abs(self) -> float:
        """Largest magnitude on boundary faces (0 for a border-null field)."""
        parts = [
            np.abs(self.u[:, :, [0, -1]]),
            np.abs(self.v[:, [0, -1], :]),
            np.abs(self.w[[0, -1], :, :]),
        ]
        return float(max(p.max() for p in parts))

    def without_boundary(self) -> "VectorField":
        return VectorField.from_interior(self.grid, self.interior())
