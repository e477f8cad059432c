"""
Unit tests for the staggered-grid divergence and pressure recovery.
"""
import numpy as np
import pytest

from domain.entities import Grid, ScalarField, SolverPath, VectorField
from domain.exceptions import InvalidGridError, SolverError
from domain.services import (
    apply_divergence,
    build_divergence,
    check_helmholtz_membership,
    check_image_is_zero_mean,
    continuity_constant,
    discrete_gradient,
    gradient_functional,
    helmholtz_split,
    l2_error,
    recover_pressure,
    resolve_path,
    weighted_inner_product,
    weighted_mean,
)
from domain.services import pressure_field
from domain.value_objects import DEFAULT_TOL
from domain.value_objects.tolerances import (
    CONTINUITY_SLACK,
    DIVERGENCE_SUM_RTOL,
    EXACT_RECOVERY_RTOL,
    SOLVER_AGREEMENT_RTOL,
    ZERO_MEAN_RTOL,
)

GRIDS = [
    Grid(nx=2),
    Grid(nx=3),
    Grid(nx=8),
    Grid(nx=4, ny=4),
    Grid(nx=4, ny=4, nz=4),
    Grid(nx=8, ny=8, nz=8),
]
SMALL_GRIDS = GRIDS[:5] + [Grid(nx=3, ny=2, nz=2, lx=1.5, ly=0.5, lz=2.0)]


def _grid_id(grid: Grid) -> str:
    return "x".join(str(n) for n in grid.counts)


def _random_zero_mean(rng, grid: Grid) -> ScalarField:
    values = rng.standard_normal(grid.n_cells)
    return ScalarField(grid, values - values.mean())


def _negative_gradient(grid: Grid, q: ScalarField) -> VectorField:
    grad = discrete_gradient(grid, q)
    return VectorField(grid, -grad.u, -grad.v, -grad.w)


def _loop_field(grid: Grid) -> VectorField:
    """Discrete divergence-free circulation on a 2x2 grid."""
    return VectorField.from_interior(grid, np.array([1.0, -1.0, -1.0, 1.0]))


def _weighted_norm(field) -> float:
    return float(np.sqrt(weighted_inner_product(field, field)))


class TestBuildDivergence:
    """Tests for build_divergence."""

    def test_two_cell_stencil(self, two_cell_grid):
        """1D, h = 0.5: one interior face feeds +2 and -2."""
        sys = build_divergence(two_cell_grid)
        np.testing.assert_allclose(sys.raw.toarray(), [[2.0], [-2.0]])
        np.testing.assert_allclose(sys.weighted.toarray(), [[2.0], [-2.0]])

    def test_two_cell_divergence(self, two_cell_grid):
        """Dv = (v/0.5, -v/0.5)."""
        sys = build_divergence(two_cell_grid)
        V = VectorField.from_interior(two_cell_grid, [3.0])
        np.testing.assert_allclose(apply_divergence(sys, V).flat(), [6.0, -6.0])

    def test_zero_field(self):
        """Divergence of V = 0 is 0."""
        grid = Grid(nx=3, ny=2)
        sys = build_divergence(grid)
        np.testing.assert_array_equal(apply_divergence(sys, VectorField.zeros(grid)).flat(), np.zeros(6))

    def test_three_cell_rank(self):
        """1D, 3 cells: rank 2."""
        report = check_image_is_zero_mean(build_divergence(Grid(nx=3)), samples=3)
        assert report.rank == 2

    def test_shapes(self):
        """D maps interior faces to cells."""
        grid = Grid(nx=4, ny=3, nz=2)
        sys = build_divergence(grid)
        assert sys.weighted.shape == (grid.n_cells, grid.n_interior_faces)

    def test_single_cell_rejected(self):
        """A one-cell box is not a valid grid."""
        with pytest.raises(InvalidGridError):
            build_divergence(Grid(nx=1))

    def test_adjoint_is_negative_gradient(self, rng):
        """(p | DV) = -(grad p | V) in the weighted inner products."""
        for grid in SMALL_GRIDS:
            sys = build_divergence(grid)
            p = ScalarField(grid, rng.standard_normal(grid.n_cells))
            V = VectorField.from_interior(grid, rng.standard_normal(grid.n_interior_faces))
            left = weighted_inner_product(p, apply_divergence(sys, V))
            right = -weighted_inner_product(discrete_gradient(grid, p), V)
            scale = _weighted_norm(p) * _weighted_norm(V) * max(1.0 / h for h in grid.spacing)
            assert abs(left - right) <= 1e-12 * scale

    def test_transpose_is_adjoint(self, rng):
        """The plain transpose of the weighted matrix is the Hilbert adjoint."""
        grid = Grid(nx=3, ny=2, nz=2, lx=1.5, ly=0.5, lz=2.0)
        sys = build_divergence(grid)
        p = ScalarField(grid, rng.standard_normal(grid.n_cells))
        V = VectorField.from_interior(grid, rng.standard_normal(grid.n_interior_faces))
        lhs = float(sys.weigh_scalar(p) @ (sys.weighted @ sys.weigh_vector(V)))
        rhs = weighted_inner_product(p, apply_divergence(sys, V))
        assert lhs == pytest.approx(rhs, rel=1e-12)


class TestZeroMeanImage:
    """Tests for check_image_is_zero_mean."""

    @pytest.mark.parametrize("grid", GRIDS, ids=_grid_id)
    def test_image_is_zero_mean(self, grid, rng):
        """Divergence theorem, rank nCells - 1 and the image angle."""
        report = check_image_is_zero_mean(build_divergence(grid), rng, samples=10)
        assert report.max_relative_sum <= DIVERGENCE_SUM_RTOL
        assert report.rank_ok
        assert report.rank == grid.n_cells - 1
        assert report.angle <= 1e-8

    def test_two_cells(self, two_cell_grid):
        """Hand case: rank 1, angle 0."""
        report = check_image_is_zero_mean(build_divergence(two_cell_grid), samples=1)
        assert report.rank == 1
        assert report.angle == pytest.approx(0.0, abs=1e-12)


class TestGradientFunctional:
    """Tests for gradient_functional and check_helmholtz_membership."""

    def test_two_cell_coords(self, two_cell_grid):
        """Coords are the weighted interior values of G."""
        sys = build_divergence(two_cell_grid)
        G = VectorField.from_interior(two_cell_grid, [1.0])
        np.testing.assert_allclose(gradient_functional(sys, G).coords, [np.sqrt(0.5)])

    def test_zero_force(self, loop_grid):
        """G = 0 is a gradient with residual 0."""
        sys = build_divergence(loop_grid)
        result = check_helmholtz_membership(sys, VectorField.zeros(loop_grid))
        assert result.contained
        assert result.residual == 0.0

    def test_discrete_gradient_is_member(self, rng):
        """G = -grad q is in the conullspace of D."""
        grid = Grid(nx=4, ny=3)
        sys = build_divergence(grid)
        G = _negative_gradient(grid, _random_zero_mean(rng, grid))
        assert check_helmholtz_membership(sys, G).contained

    def test_loop_is_not_a_gradient(self, loop_grid):
        """A circulation on 2x2 cells is divergence-free, not a gradient."""
        sys = build_divergence(loop_grid)
        loop = _loop_field(loop_grid)
        np.testing.assert_allclose(apply_divergence(sys, loop).flat(), np.zeros(4), atol=1e-14)
        result = check_helmholtz_membership(sys, loop)
        assert not result.contained
        assert result.residual == pytest.approx(_weighted_norm(loop))

    def test_loop_on_cg_path(self, loop_grid):
        """The iterative path reports the same incompatibility."""
        sys = build_divergence(loop_grid)
        result = check_helmholtz_membership(sys, _loop_field(loop_grid), dense_max_cells=0)
        assert not result.contained
        assert result.residual == pytest.approx(1.0)


class TestRecoverPressure:
    """Tests for recover_pressure."""

    def test_two_cell_hand_solve(self, two_cell_grid):
        """Interior force 1, h = 0.5 gives p = (0.25, -0.25)."""
        sys = build_divergence(two_cell_grid)
        G = VectorField.from_interior(two_cell_grid, [1.0])
        solution = recover_pressure(sys, G)
        np.testing.assert_allclose(solution.pressure.flat(), [0.25, -0.25], atol=1e-14)
        assert solution.path is SolverPath.DENSE
        assert solution.compatible

    @pytest.mark.parametrize("path", [SolverPath.DENSE, SolverPath.CG])
    def test_zero_force(self, path):
        """G = 0 gives p = 0 with residual 0."""
        grid = Grid(nx=3, ny=3)
        solution = recover_pressure(build_divergence(grid), VectorField.zeros(grid), path=path)
        np.testing.assert_array_equal(solution.pressure.flat(), np.zeros(9))
        assert solution.residual == 0.0

    @pytest.mark.parametrize("grid", GRIDS, ids=_grid_id)
    def test_exact_recovery_of_discrete_gradients(self, grid, rng):
        """G = -grad q returns q for zero-mean q."""
        q = _random_zero_mean(rng, grid)
        solution = recover_pressure(build_divergence(grid), _negative_gradient(grid, q))
        assert l2_error(solution.pressure, q) <= EXACT_RECOVERY_RTOL * _weighted_norm(q)
        assert solution.relative_residual <= DEFAULT_TOL

    def test_zero_mean(self, rng):
        """The recovered pressure has zero weighted mean."""
        grid = Grid(nx=5, ny=3)
        sys = build_divergence(grid)
        G = VectorField.from_interior(grid, rng.standard_normal(grid.n_interior_faces))
        p = recover_pressure(sys, G).pressure
        assert abs(weighted_mean(p)) <= ZERO_MEAN_RTOL * max(_weighted_norm(p), 1.0)

    def test_deterministic(self, rng):
        """Two solves of one force agree bitwise."""
        grid = Grid(nx=4, ny=4)
        sys = build_divergence(grid)
        G = VectorField.from_interior(grid, rng.standard_normal(grid.n_interior_faces))
        first = recover_pressure(sys, G).pressure.flat()
        second = recover_pressure(build_divergence(grid), G).pressure.flat()
        np.testing.assert_array_equal(first, second)

    def test_linearity(self, rng):
        """Scaling G by alpha scales p by alpha."""
        grid = Grid(nx=3, ny=3)
        sys = build_divergence(grid)
        coords = rng.standard_normal(grid.n_interior_faces)
        p = recover_pressure(sys, VectorField.from_interior(grid, coords)).pressure.flat()
        scaled = recover_pressure(sys, VectorField.from_interior(grid, -2.5 * coords)).pressure.flat()
        np.testing.assert_allclose(scaled, -2.5 * p, rtol=1e-10, atol=1e-12)

    def test_incompatible_force_reports_residual(self, loop_grid, caplog):
        """A divergence-free force is solved on its gradient part and flagged."""
        solution = recover_pressure(build_divergence(loop_grid), _loop_field(loop_grid))
        np.testing.assert_allclose(solution.pressure.flat(), np.zeros(4), atol=1e-14)
        assert solution.relative_residual == pytest.approx(1.0)
        assert not solution.compatible
        assert "divergence-free component" in caplog.text

    def test_boundary_entries_ignored(self, two_cell_grid):
        """Boundary faces of the force do not enter the solve."""
        sys = build_divergence(two_cell_grid)
        G = VectorField(two_cell_grid, np.array([5.0, 1.0, -3.0]), np.zeros(4), np.zeros(4))
        np.testing.assert_allclose(recover_pressure(sys, G).pressure.flat(), [0.25, -0.25], atol=1e-14)

    @pytest.mark.parametrize("grid", [Grid(nx=8), Grid(nx=4, ny=4), Grid(nx=4, ny=4, nz=4)], ids=_grid_id)
    def test_dense_and_cg_agree(self, grid, rng):
        """Both solver paths give the same pressure."""
        sys = build_divergence(grid)
        G = VectorField.from_interior(grid, rng.standard_normal(grid.n_interior_faces))
        dense = recover_pressure(sys, G, path=SolverPath.DENSE)
        cg = recover_pressure(sys, G, path=SolverPath.CG, cg_rtol=1e-12)
        assert cg.path is SolverPath.CG
        assert cg.iterations is not None and cg.iterations > 0
        assert l2_error(dense.pressure, cg.pressure) <= SOLVER_AGREEMENT_RTOL * _weighted_norm(dense.pressure)
        assert abs(cg.residual - dense.residual) <= SOLVER_AGREEMENT_RTOL * np.linalg.norm(sys.weigh_vector(G))

    def test_cg_failure_raises(self, monkeypatch):
        """A stalled CG run is an error, not a silent result."""
        grid = Grid(nx=4, ny=4)
        monkeypatch.setattr(
            pressure_field.sparse_linalg, "cg", lambda *args, **kwargs: (np.zeros(grid.n_cells), 160)
        )
        G = VectorField.from_interior(grid, np.ones(grid.n_interior_faces))
        with pytest.raises(SolverError):
            recover_pressure(build_divergence(grid), G, path=SolverPath.CG)

    def test_resolve_path(self):
        """auto picks dense up to the cell limit, CG above."""
        sys = build_divergence(Grid(nx=4, ny=4))
        assert resolve_path(sys, SolverPath.AUTO, dense_max_cells=16) is SolverPath.DENSE
        assert resolve_path(sys, SolverPath.AUTO, dense_max_cells=15) is SolverPath.CG
        assert resolve_path(sys, "cg") is SolverPath.CG


class TestCgAccuracy:
    """Tests for the iterative path at its configured stopping tolerance."""

    @pytest.mark.parametrize("grid", SMALL_GRIDS, ids=_grid_id)
    def test_closed_form_sigma_matches_svd(self, grid):
        """The closed-form smallest nonzero singular value agrees with the SVD."""
        sys = build_divergence(grid)
        assert sys.sigma_min_nonzero == pytest.approx(sys.iso.svd.sigma_min_nonzero, rel=1e-12)

    def test_gradient_is_member_on_cg_path(self, rng):
        """G = -grad q is a gradient on the CG path, not only on the dense one."""
        grid = Grid(nx=16, ny=16)
        sys = build_divergence(grid)
        G = _negative_gradient(grid, _random_zero_mean(rng, grid))
        result = check_helmholtz_membership(sys, G, dense_max_cells=0)
        assert result.contained
        assert result.residual <= DEFAULT_TOL * np.linalg.norm(sys.weigh_vector(G))

    def test_gradient_is_member_on_auto_path(self, rng):
        """Above the dense cell limit the default call still accepts a gradient."""
        grid = Grid(nx=32, ny=32)
        sys = build_divergence(grid)
        assert resolve_path(sys, SolverPath.AUTO) is SolverPath.CG
        G = _negative_gradient(grid, _random_zero_mean(rng, grid))
        assert check_helmholtz_membership(sys, G).contained

    @pytest.mark.parametrize("grid", [Grid(nx=16, ny=16), Grid(nx=32, ny=32), Grid(nx=16, ny=16, nz=16)], ids=_grid_id)
    def test_recovery_at_default_rtol(self, grid, rng, caplog):
        """A compatible force is compatible, unflagged, and within the reported error bound."""
        sys = build_divergence(grid)
        q = _random_zero_mean(rng, grid)
        solution = recover_pressure(sys, _negative_gradient(grid, q), path=SolverPath.CG)
        assert solution.compatible
        assert solution.relative_residual <= DEFAULT_TOL
        assert "divergence-free component" not in caplog.text
        assert solution.error_bound <= 1e-6 * _weighted_norm(q)
        assert l2_error(solution.pressure, q) <= solution.error_bound + 1e-12 * _weighted_norm(q)

    def test_dense_path_has_no_error_bound(self, two_cell_grid):
        """Only the iterative path reports a stopping-error bound."""
        solution = recover_pressure(build_divergence(two_cell_grid), VectorField.from_interior(two_cell_grid, [1.0]))
        assert solution.error_bound is None

    def test_solver_settings_reach_cg(self, rng, monkeypatch):
        """Membership and split use the given rtol and iteration factor."""
        grid = Grid(nx=4, ny=4)
        sys = build_divergence(grid)
        F = VectorField.from_interior(grid, rng.standard_normal(grid.n_interior_faces))
        calls = []
        solve = pressure_field.sparse_linalg.cg

        def recording(*args, **kwargs):
            calls.append((kwargs["rtol"], kwargs["maxiter"]))
            return solve(*args, **kwargs)

        monkeypatch.setattr(pressure_field.sparse_linalg, "cg", recording)
        check_helmholtz_membership(sys, F, dense_max_cells=0, cg_rtol=1e-12, cg_maxiter_factor=3)
        helmholtz_split(sys, F, path=SolverPath.CG, cg_rtol=1e-11, cg_maxiter_factor=5)
        assert calls == [(1e-12, 48), (1e-11, 80)]


class TestHelmholtzSplit:
    """Tests for helmholtz_split."""

    def test_gradient_has_no_solenoidal_part(self, rng):
        """F in Im(D^T) splits as (F, 0)."""
        grid = Grid(nx=4, ny=3)
        F = _negative_gradient(grid, _random_zero_mean(rng, grid))
        split = helmholtz_split(build_divergence(grid), F)
        assert _weighted_norm(split.solenoidal) <= 1e-10 * _weighted_norm(F)

    def test_loop_has_no_gradient_part(self, loop_grid):
        """F in N(D) splits as (0, F)."""
        loop = _loop_field(loop_grid)
        split = helmholtz_split(build_divergence(loop_grid), loop)
        assert _weighted_norm(split.gradient) <= 1e-12
        np.testing.assert_allclose(split.solenoidal.interior(), loop.interior(), atol=1e-14)

    @pytest.mark.parametrize("path,orthogonality", [(SolverPath.DENSE, 1e-10), (SolverPath.CG, 1e-8)])
    def test_random_field(self, rng, path, orthogonality):
        """Parts are orthogonal, reassemble to F, and the solenoidal part is divergence-free."""
        grid = Grid(nx=4, ny=4, nz=2)
        sys = build_divergence(grid)
        F = VectorField.from_interior(grid, rng.standard_normal(grid.n_interior_faces))
        split = helmholtz_split(sys, F, path=path)
        norm_sq = _weighted_norm(F) ** 2
        assert abs(weighted_inner_product(split.gradient, split.solenoidal)) <= orthogonality * norm_sq
        np.testing.assert_allclose(
            split.gradient.interior() + split.solenoidal.interior(), F.interior(), rtol=0, atol=1e-12
        )
        divergence = apply_divergence(sys, split.solenoidal).flat()
        assert np.linalg.norm(divergence) <= 1e-8 * np.linalg.norm(sys.raw.toarray(), 2) * np.linalg.norm(F.interior())


class TestContinuityConstant:
    """Tests for continuity_constant."""

    def test_two_cells(self, two_cell_grid):
        """C = 1 / sigma([2, -2]) = 1 / (2 sqrt 2)."""
        assert continuity_constant(build_divergence(two_cell_grid)) == pytest.approx(1.0 / (2.0 * np.sqrt(2.0)))

    @pytest.mark.parametrize("grid", SMALL_GRIDS, ids=_grid_id)
    def test_bound_holds(self, grid, rng):
        """|p| <= C |G| on random forces."""
        sys = build_divergence(grid)
        C = continuity_constant(sys)
        for _ in range(20):
            G = VectorField.from_interior(grid, rng.standard_normal(grid.n_interior_faces))
            p = recover_pressure(sys, G).pressure
            assert _weighted_norm(p) <= C * _weighted_norm(G) * (1 + CONTINUITY_SLACK)

    def test_bound_is_sharp(self, two_cell_grid):
        """The hand solve attains the bound."""
        sys = build_divergence(two_cell_grid)
        G = VectorField.from_interior(two_cell_grid, [1.0])
        p = recover_pressure(sys, G).pressure
        assert _weighted_norm(p) == pytest.approx(continuity_constant(sys) * _weighted_norm(G))
