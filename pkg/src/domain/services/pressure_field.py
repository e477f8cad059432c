"""
Discrete divergence on a MAC staggered grid and the pressure equation
{-grad p = G, mean(p) = 0}.

Coordinates are weighted so that the plain transpose is the Hilbert adjoint:
cell values are scaled by sqrt(cell volume), interior-face values by
sqrt(face volume). On a uniform box every face control volume equals the cell
volume, so the weighted matrix D coincides with the raw stencil, but the
weights are still carried explicitly.

With G = -grad p the weak identity (p | div V) = (G | V) reads D^T p = g in
weighted coordinates, and D^T = -Grad.
"""
import logging
from dataclasses import dataclass
from functools import cached_property
from typing import Optional, Tuple

import numpy as np
import scipy.sparse as sparse
import scipy.sparse.linalg as sparse_linalg

from domain.entities import (
    Functional,
    Grid,
    Operator,
    ScalarField,
    SolverPath,
    SubspaceBasis,
    VectorField,
)
from domain.exceptions import DimensionMismatchError, RankZeroError, SolverError
from domain.services.operator_core import complement_basis, largest_principal_angle, project
from domain.services.riesz_iso import (
    IsoContext,
    MembershipResult,
    conullspace_contains,
    invert_iso_tilde,
)
from domain.value_objects import DEFAULT_TOL

logger = logging.getLogger(__name__)

DENSE_MAX_CELLS = 1000
CG_RTOL = 1e-10
CG_MAXITER_FACTOR = 10


def _difference(n: int, h: float) -> sparse.csr_matrix:
    """(n x n-1) one-axis stencil: cell i gets +1/h from face i+1 and -1/h from face i."""
    return ((sparse.eye(n, n - 1, k=0) - sparse.eye(n, n - 1, k=-1)) / h).tocsr()


def _assemble(grid: Grid) -> sparse.csr_matrix:
    """Raw divergence, interior faces (u block, v block, w block) -> cells."""
    nx, ny, nz = grid.counts
    hx, hy, hz = grid.spacing
    blocks = []
    if nx > 1:
        blocks.append(sparse.kron(sparse.identity(nz * ny), _difference(nx, hx)))
    if ny > 1:
        blocks.append(sparse.kron(sparse.identity(nz), sparse.kron(_difference(ny, hy), sparse.identity(nx))))
    if nz > 1:
        blocks.append(sparse.kron(_difference(nz, hz), sparse.identity(ny * nx)))
    return sparse.hstack(blocks, format="csr")


@dataclass(frozen=True, eq=False)
class DivergenceSystem:
    """
    Divergence of a border-null velocity field, in weighted coordinates.
    The dense operator and its IsoContext are built on first use.
    """
    grid: Grid
    raw: sparse.csr_matrix
    weighted: sparse.csr_matrix
    tol: float = DEFAULT_TOL

    @property
    def n_cells(self) -> int:
        return self.grid.n_cells

    @property
    def n_faces(self) -> int:
        return self.grid.n_interior_faces

    @property
    def cell_weight(self) -> float:
        return float(np.sqrt(self.grid.cell_volume))

    @property
    def face_weight(self) -> float:
        # face control volume: h_axis times the cross-section, i.e. the cell volume
        return float(np.sqrt(self.grid.cell_volume))

    @cached_property
    def operator(self) -> Operator:
        return Operator(self.weighted.toarray())

    @cached_property
    def iso(self) -> IsoContext:
        logger.info(f"Building dense isomorphism context for {self.n_cells} cells, {self.n_faces} faces")
        return IsoContext.build(self.operator, self.tol)

    @cached_property
    def sigma_min_nonzero(self) -> float:
        """
        Smallest nonzero singular value of the weighted D without an SVD.
        D D^T is a sum of one-axis Neumann Laplacians, whose lowest nonzero
        eigenvalue is (2/h sin(pi / 2n))^2; the minimum over active axes wins.
        """
        modes = [
            2.0 / h * np.sin(np.pi / (2 * n))
            for n, h in zip(self.grid.counts, self.grid.spacing)
            if n > 1
        ]
        return float(min(modes)) * self.cell_weight / self.face_weight

    @cached_property
    def laplacian(self) -> sparse.csr_matrix:
        """D D^T: the Neumann-type Laplacian on cell values (weighted)."""
        return (self.weighted @ self.weighted.T).tocsr()

    def weigh_scalar(self, p: ScalarField) -> np.ndarray:
        return self.cell_weight * p.flat()

    def unweigh_scalar(self, coords: np.ndarray) -> ScalarField:
        return ScalarField(self.grid, np.asarray(coords) / self.cell_weight)

    def weigh_vector(self, v: VectorField) -> np.ndarray:
        return self.face_weight * v.interior()

    def unweigh_vector(self, coords: np.ndarray) -> VectorField:
        return VectorField.from_interior(self.grid, np.asarray(coords) / self.face_weight)


@dataclass(frozen=True)
class ZeroMeanReport:
    """Discrete Im(div) = zero-mean scalars."""
    max_relative_sum: float
    rank: int
    expected_rank: int
    angle: float
    samples: int

    @property
    def rank_ok(self) -> bool:
        return self.rank == self.expected_rank


@dataclass(frozen=True, eq=False)
class PressureSolution:
    """
    Recovered zero-mean pressure plus diagnostics of the solve.

    On the CG path `residual` discounts the part of |g - D^T p| that the
    stopping error can explain, and `error_bound` bounds |p - p_exact| in the
    weighted L2 norm. The dense path has no stopping error (`error_bound` None).
    """
    pressure: ScalarField
    residual: float            # |divergence-free component of G| (weighted)
    relative_residual: float   # residual / |G|
    path: SolverPath
    iterations: Optional[int] = None
    error_bound: Optional[float] = None

    @property
    def compatible(self) -> bool:
        return self.relative_residual <= DEFAULT_TOL


@dataclass(frozen=True, eq=False)
class HelmholtzSplit:
    gradient: VectorField
    solenoidal: VectorField


def build_divergence(grid: Grid, tol: float = DEFAULT_TOL) -> DivergenceSystem:
    """Assemble the divergence of `grid` (Grid itself rejects single-cell boxes)."""
    raw = _assemble(grid)
    cell_weight = np.sqrt(grid.cell_volume)
    face_weight = np.sqrt(grid.cell_volume)
    weighted = (raw * (cell_weight / face_weight)).tocsr()
    logger.debug(f"Assembled divergence {raw.shape[0]}x{raw.shape[1]} with {raw.nnz} nonzeros")
    return DivergenceSystem(grid=grid, raw=raw, weighted=weighted, tol=tol)


def _check_grid(sys: DivergenceSystem, grid: Grid) -> None:
    if grid != sys.grid:
        raise DimensionMismatchError(f"field grid {grid.counts} does not match system grid {sys.grid.counts}")


def apply_divergence(sys: DivergenceSystem, V: VectorField) -> ScalarField:
    """Cell divergences of V; boundary faces are not part of the velocity coordinates."""
    _check_grid(sys, V.grid)
    return ScalarField(sys.grid, sys.raw @ V.interior())


def discrete_gradient(grid: Grid, p: ScalarField) -> VectorField:
    """(p_right - p_left) / h on interior faces; boundary faces 0."""
    u_shape, v_shape, w_shape = grid.face_shapes
    u, v, w = np.zeros(u_shape), np.zeros(v_shape), np.zeros(w_shape)
    values = p.values
    hx, hy, hz = grid.spacing
    u[:, :, 1:-1] = np.diff(values, axis=2) / hx
    v[:, 1:-1, :] = np.diff(values, axis=1) / hy
    w[1:-1, :, :] = np.diff(values, axis=0) / hz
    return VectorField(grid, u, v, w)


def weighted_mean(p: ScalarField) -> float:
    """Volume-weighted mean over the box."""
    grid = p.grid
    return float(grid.cell_volume * np.sum(p.values) / np.prod(grid.lengths))


def weighted_inner_product(a, b) -> float:
    """
    L2 pairing: cell volumes for scalar fields, face volumes over interior
    faces for vector fields.
    """
    if isinstance(a, ScalarField) and isinstance(b, ScalarField):
        if a.grid != b.grid:
            raise DimensionMismatchError("scalar fields live on different grids")
        return float(a.grid.cell_volume * np.dot(a.flat(), b.flat()))
    if isinstance(a, VectorField) and isinstance(b, VectorField):
        if a.grid != b.grid:
            raise DimensionMismatchError("vector fields live on different grids")
        return float(a.grid.cell_volume * np.dot(a.interior(), b.interior()))
    raise TypeError(f"cannot pair {type(a).__name__} with {type(b).__name__}")


def l2_error(p: ScalarField, q: ScalarField) -> float:
    """Weighted L2 distance between two scalar fields."""
    if p.grid != q.grid:
        raise DimensionMismatchError("scalar fields live on different grids")
    diff = ScalarField(p.grid, p.flat() - q.flat())
    return float(np.sqrt(weighted_inner_product(diff, diff)))


def zero_mean_basis(n_cells: int) -> SubspaceBasis:
    """Orthonormal basis of the weighted zero-mean subspace (complement of constants)."""
    ones = SubspaceBasis(n_cells, np.full((n_cells, 1), 1.0 / np.sqrt(n_cells)))
    return complement_basis(ones)


def check_image_is_zero_mean(
    sys: DivergenceSystem,
    rng: Optional[np.random.Generator] = None,
    samples: int = 20,
) -> ZeroMeanReport:
    """
    Divergence theorem on random border-null V, rank(D) = nCells - 1, and the
    angle between Im(D) and the zero-mean subspace.
    """
    rng = rng if rng is not None else np.random.default_rng(0)
    worst = 0.0
    for _ in range(samples):
        v = rng.standard_normal(sys.n_faces)
        total = abs(sys.grid.cell_volume * float(np.sum(sys.raw @ v)))
        worst = max(worst, total / max(float(np.linalg.norm(v)), np.finfo(float).tiny))

    iso = sys.iso
    return ZeroMeanReport(
        max_relative_sum=worst,
        rank=iso.rank,
        expected_rank=sys.n_cells - 1,
        angle=largest_principal_angle(iso.image, zero_mean_basis(sys.n_cells)),
        samples=samples,
    )


def gradient_functional(sys: DivergenceSystem, G: VectorField) -> Functional:
    """G* = (G | .) on velocity coordinates; boundary entries of G drop out."""
    _check_grid(sys, G.grid)
    return Functional(sys.weigh_vector(G))


def _project_zero_mean(x: np.ndarray) -> np.ndarray:
    return x - np.mean(x)


def resolve_path(sys: DivergenceSystem, path: SolverPath, dense_max_cells: int = DENSE_MAX_CELLS) -> SolverPath:
    """Dense up to `dense_max_cells` cells, CG above."""
    path = SolverPath(path)
    if path is SolverPath.AUTO:
        return SolverPath.DENSE if sys.n_cells <= dense_max_cells else SolverPath.CG
    return path


def _solve_dense(sys: DivergenceSystem, g: np.ndarray) -> Tuple[np.ndarray, float]:
    iso = sys.iso
    membership = conullspace_contains(iso, Functional(g))
    compatible = project(iso.row_space(), g)
    p = invert_iso_tilde(iso, Functional(compatible))
    return _project_zero_mean(p), membership.residual


def _solve_cg(
    sys: DivergenceSystem, g: np.ndarray, rtol: float, maxiter_factor: int
) -> Tuple[np.ndarray, float, int, float]:
    """
    Returns (p, residual, iterations, error_bound).

    With r = g - D^T p, D r = D D^T (p_exact - p), so |D r| / sigma bounds the
    gradient error and |D r| / sigma^2 the pressure error. The gradient error
    is orthogonal to the divergence-free part of g and is removed from |r|.
    """
    n = sys.n_cells
    rhs = _project_zero_mean(sys.weighted @ g)
    if not np.any(rhs):
        return np.zeros(n), float(np.linalg.norm(g)), 0, 0.0

    laplacian = sys.laplacian

    def matvec(x):
        return _project_zero_mean(laplacian @ _project_zero_mean(np.ravel(x)))

    op = sparse_linalg.LinearOperator((n, n), matvec=matvec, dtype=np.float64)
    iterations = 0

    def count(_):
        nonlocal iterations
        iterations += 1

    maxiter = maxiter_factor * n
    p, info = sparse_linalg.cg(op, rhs, rtol=rtol, atol=0.0, maxiter=maxiter, callback=count)
    if info > 0:
        raise SolverError(f"conjugate gradient did not reach rtol {rtol:.1e} in {maxiter} iterations", iterations)
    if info < 0:
        raise SolverError("conjugate gradient breakdown", iterations)
    p = _project_zero_mean(p)
    r = g - sys.weighted.T @ p
    defect = float(np.linalg.norm(sys.weighted @ r))
    sigma = sys.sigma_min_nonzero
    gradient_error = defect / sigma
    residual = float(np.sqrt(max(float(r @ r) - gradient_error ** 2, 0.0)))
    return p, residual, iterations, defect / sigma ** 2


def recover_pressure(
    sys: DivergenceSystem,
    G: VectorField,
    path: SolverPath = SolverPath.AUTO,
    dense_max_cells: int = DENSE_MAX_CELLS,
    cg_rtol: float = CG_RTOL,
    cg_maxiter_factor: int = CG_MAXITER_FACTOR,
) -> PressureSolution:
    """
    The unique zero-mean p with (p | div V) = (G | V) for all border-null V.
    An incompatible G is solved on its gradient part; the divergence-free
    remainder is reported as the residual.

    Raises:
        SolverError: CG did not converge
    """
    g = gradient_functional(sys, G).coords
    chosen = resolve_path(sys, path, dense_max_cells)
    iterations = error_bound = None
    if chosen is SolverPath.DENSE:
        p, residual = _solve_dense(sys, g)
    else:
        p, residual, iterations, error_bound = _solve_cg(sys, g, cg_rtol, cg_maxiter_factor)
        logger.debug(
            f"CG converged in {iterations} iterations on {sys.n_cells} cells, pressure error <= {error_bound:.3e}"
        )

    g_norm = float(np.linalg.norm(g))
    relative = residual / g_norm if g_norm > 0 else 0.0
    if relative > DEFAULT_TOL:
        logger.warning(f"Force field has a divergence-free component: relative residual {relative:.3e}")
    return PressureSolution(
        pressure=sys.unweigh_scalar(p),
        residual=residual,
        relative_residual=relative,
        path=chosen,
        iterations=iterations,
        error_bound=error_bound,
    )


def check_helmholtz_membership(
    sys: DivergenceSystem,
    G: VectorField,
    tol: Optional[float] = None,
    dense_max_cells: int = DENSE_MAX_CELLS,
    cg_rtol: float = CG_RTOL,
    cg_maxiter_factor: int = CG_MAXITER_FACTOR,
) -> MembershipResult:
    """
    Whether G is a discrete gradient, i.e. G* vanishes on divergence-free fields.
    The residual is the norm of G's divergence-free component.
    """
    f = gradient_functional(sys, G)
    if resolve_path(sys, SolverPath.AUTO, dense_max_cells) is SolverPath.DENSE:
        return conullspace_contains(sys.iso, f, tol)
    tol = sys.tol if tol is None else tol
    _, residual, _, _ = _solve_cg(sys, f.coords, cg_rtol, cg_maxiter_factor)
    return MembershipResult(contained=residual <= tol * max(f.norm(), 1.0), residual=residual)


def helmholtz_split(
    sys: DivergenceSystem,
    F: VectorField,
    path: SolverPath = SolverPath.AUTO,
    dense_max_cells: int = DENSE_MAX_CELLS,
    cg_rtol: float = CG_RTOL,
    cg_maxiter_factor: int = CG_MAXITER_FACTOR,
) -> HelmholtzSplit:
    """F = F_grad + F_sol with F_grad in Im(D^T) and F_sol in N(D), orthogonal."""
    f = gradient_functional(sys, F).coords
    chosen = resolve_path(sys, path, dense_max_cells)
    if chosen is SolverPath.DENSE:
        p, _ = _solve_dense(sys, f)
    else:
        p, _, _, _ = _solve_cg(sys, f, cg_rtol, cg_maxiter_factor)
    grad = sys.weighted.T @ p
    return HelmholtzSplit(
        gradient=sys.unweigh_vector(grad),
        solenoidal=sys.unweigh_vector(f - grad),
    )


def continuity_constant(sys: DivergenceSystem) -> float:
    """
    Best C with |p| <= C |G_compatible| in weighted L2 norms: 1 / sigma_min+(D^T).

    Raises:
        RankZeroError: D has no nonzero singular value
    """
    sigma = sys.iso.svd.sigma_min_nonzero
    if sigma == 0.0:
        raise RankZeroError("divergence has rank 0; pressure map has no finite constant")
    return 1.0 / sigma
