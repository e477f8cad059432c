"""
Unit tests for domain entities.
"""
import numpy as np
import pytest
from pydantic import ValidationError

from domain.entities import (
    CheckRecord,
    CosetVector,
    Functional,
    Grid,
    ManufacturedCase,
    Operator,
    Report,
    RunConfig,
    ScalarField,
    SubspaceBasis,
    SuiteMetadata,
    VectorField,
)
from domain.exceptions import (
    ComplexScalarError,
    DimensionMismatchError,
    InvalidGridError,
    InvalidInputError,
)


class TestOperator:
    """Tests for Operator entity."""

    def test_from_row_major(self):
        """Flat row-major entries fill rows first."""
        A = Operator.from_row_major(2, 3, [1, 2, 3, 4, 5, 6])
        assert A.shape == (2, 3)
        assert A.entries[1, 0] == 4.0
        assert A.row_major() == [1.0, 2.0, 3.0, 4.0, 5.0, 6.0]

    def test_row_major_length_checked(self):
        """Entry count must equal rows * cols."""
        with pytest.raises(DimensionMismatchError):
            Operator.from_row_major(2, 2, [1, 2, 3])

    def test_complex_rejected(self):
        """Complex scalars are refused."""
        with pytest.raises(ComplexScalarError):
            Operator.create([[1 + 1j, 0]])

    def test_non_finite_rejected(self):
        """NaN entries are refused."""
        with pytest.raises(InvalidInputError):
            Operator.create([[np.nan, 1.0]])

    def test_entries_read_only(self):
        """Entries cannot be mutated after construction."""
        A = Operator.identity(2)
        with pytest.raises(ValueError):
            A.entries[0, 0] = 5.0

    def test_apply_checks_dimension(self):
        """apply and apply_transpose check vector dimensions."""
        A = Operator.zeros(2, 3)
        with pytest.raises(DimensionMismatchError):
            A.apply([1.0, 2.0])
        with pytest.raises(DimensionMismatchError):
            A.apply_transpose([1.0, 2.0, 3.0])

    def test_transpose(self):
        """Transpose swaps the shape."""
        A = Operator.create([[1.0, 2.0, 3.0]])
        assert A.transpose().shape == (3, 1)
        np.testing.assert_array_equal(A.apply_transpose([2.0]), [2.0, 4.0, 6.0])


class TestSubspaceBasis:
    """Tests for SubspaceBasis entity."""

    def test_rejects_non_orthonormal(self):
        """Columns must be orthonormal."""
        with pytest.raises(InvalidInputError):
            SubspaceBasis(2, np.array([[1.0, 1.0], [0.0, 1.0]]))

    def test_empty_and_standard(self):
        """Empty basis has dim 0; standard basis spans the space."""
        assert SubspaceBasis.empty(3).dim == 0
        assert SubspaceBasis.standard(3).dim == 3

    def test_from_vectors(self):
        """Builds a basis from a list of vectors."""
        B = SubspaceBasis.from_vectors(2, [[0.0, 1.0]])
        assert B.dim == 1
        np.testing.assert_array_equal(B.vector_list()[0], [0.0, 1.0])


class TestFunctionalAndCoset:
    """Tests for Functional and CosetVector."""

    def test_functional_evaluation(self):
        """A functional pairs with vectors of its dimension."""
        f = Functional(np.array([3.0, 4.0]))
        assert f([1.0, 1.0]) == 7.0
        assert f.norm() == 5.0
        with pytest.raises(DimensionMismatchError):
            f([1.0])

    def test_coset_dimension_checked(self):
        """Representative must live where the nullspace lives."""
        with pytest.raises(DimensionMismatchError):
            CosetVector(np.zeros(2), SubspaceBasis.empty(3))

    def test_coset_shift(self):
        """Shifting moves the representative only."""
        N = SubspaceBasis.from_vectors(2, [[1.0, 0.0]])
        c = CosetVector(np.array([1.0, 2.0]), N).shifted([5.0, 0.0])
        np.testing.assert_array_equal(c.representative, [6.0, 2.0])


class TestGrid:
    """Tests for Grid entity."""

    def test_single_cell_rejected(self):
        """A grid needs at least two cells."""
        with pytest.raises(InvalidGridError):
            Grid(nx=1)

    def test_non_positive_length_rejected(self):
        """Lengths must be positive."""
        with pytest.raises(InvalidGridError):
            Grid(nx=4, lx=0.0)

    def test_derived_quantities(self):
        """Spacing, volume and face counts of a 2D grid."""
        grid = Grid.create((4, 2, 1), (2.0, 1.0, 1.0))
        assert grid.spacing == (0.5, 0.5, 1.0)
        assert grid.cell_volume == 0.25
        assert grid.dimension == 2
        assert grid.n_interior_faces == 3 * 2 + 4 * 1
        assert grid.face_shapes[0] == (1, 2, 5)

    def test_cell_centers(self, two_cell_grid):
        """Cell centers sit half a spacing inside."""
        np.testing.assert_allclose(two_cell_grid.cell_centers(0), [0.25, 0.75])


class TestFields:
    """Tests for ScalarField and VectorField."""

    def test_scalar_size_checked(self, two_cell_grid):
        """Scalar field needs one value per cell."""
        with pytest.raises(DimensionMismatchError):
            ScalarField(two_cell_grid, np.zeros(3))

    def test_scalar_layout_x_fastest(self):
        """Flat order is x fastest."""
        grid = Grid(nx=2, ny=2)
        p = ScalarField(grid, np.arange(4.0))
        assert p.values[0, 1, 0] == 2.0
        np.testing.assert_array_equal(p.flat(), np.arange(4.0))

    def test_interior_roundtrip(self, loop_grid):
        """from_interior and interior are inverse; boundary stays zero."""
        coords = np.array([1.0, 2.0, 3.0, 4.0])
        V = VectorField.from_interior(loop_grid, coords)
        np.testing.assert_array_equal(V.interior(), coords)
        assert V.boundary_max_abs() == 0.0

    def test_boundary_detected_and_dropped(self, two_cell_grid):
        """Nonzero boundary faces are reported and can be stripped."""
        V = VectorField(two_cell_grid, np.array([7.0, 1.0, 0.0]), np.zeros(4), np.zeros(4))
        assert V.boundary_max_abs() == 7.0
        assert V.without_boundary().boundary_max_abs() == 0.0


class TestManufacturedCase:
    """Tests for ManufacturedCase enum."""

    def test_axes(self):
        """Each case varies along its number of axes."""
        assert ManufacturedCase("cosX").axes == 1
        assert ManufacturedCase.COS_X_COS_Y_COS_Z.axes == 3


class TestReportModels:
    """Tests for RunConfig and Report models."""

    def test_trials_must_be_positive(self):
        """trials = 0 is a configuration error."""
        with pytest.raises(ValidationError):
            RunConfig(trials=0)

    def test_tol_must_be_positive(self):
        """tol must be strictly positive."""
        with pytest.raises(ValidationError):
            RunConfig(tol=0.0)

    def test_report_passes_iff_all_records_pass(self):
        """Overall verdict is the conjunction of the records."""
        good = CheckRecord(name="a", worst_residual=0.0, threshold=1.0, passed=True)
        bad = CheckRecord(name="b", worst_residual=2.0, threshold=1.0, passed=False)
        meta = SuiteMetadata(command="check-iso")
        assert Report.build([good], meta).passed
        report = Report.build([good, bad], meta)
        assert not report.passed
        assert [r.name for r in report.failed()] == ["b"]

    def test_json_uses_aliases(self):
        """Records serialize with camelCase keys and a 'pass' flag."""
        record = CheckRecord(name="a", worst_residual=0.5, threshold=1.0, passed=True)
        text = Report.build([record], SuiteMetadata(command="check-iso")).to_json()
        assert '"worstResidual": 0.5' in text
        assert '"pass": true' in text
