"""
Application use cases for the verification harness.
"""
import logging
import math
import time
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

import numpy as np

from domain.entities import (
    CheckRecord,
    Grid,
    ManufacturedCase,
    MmsRow,
    MmsTable,
    Operator,
    Report,
    RunConfig,
    SolverPath,
    SuiteMetadata,
    VectorField,
)
from domain.exceptions import ConfigError, NumericsError
from domain.repositories import IFieldRepository, IReportRepository
from domain.services import (
    PressureSolution,
    build_divergence,
    continuity_constant,
    l2_error,
    manufactured,
    recover_pressure,
)
from domain.value_objects import DEFAULT_TOL, is_strictly_increasing, rng_for
from domain.value_objects.tolerances import MMS_MIN_RATIO
from application.use_cases.iso_checks import (
    CheckOutcome,
    aggregate,
    gaussian_operator,
    projector_checks,
    riesz_identity_check,
    safe_evaluate,
    structured_operators,
)
from infrastructure.scheduler import TrialExecutor

logger = logging.getLogger(__name__)

MMS_MIN_N = 4


# ============================================================================
# check-iso
# ============================================================================

@dataclass
class CheckIsoResult:
    """Result of an isomorphism check run."""
    success: bool
    report: Optional[Report] = None
    report_path: Optional[str] = None
    error: Optional[str] = None


@dataclass(frozen=True, eq=False)
class _Trial:
    label: str
    operator: Operator
    stream: Tuple[int, ...]


class CheckIsoUseCase:
    """Evaluate every isomorphism identity on random and structured operators."""

    def __init__(
        self,
        executor: TrialExecutor,
        report_repo: IReportRepository,
        projector_samples: int = 50,
        near_rank_ratio: float = 1e-8,
    ):
        self._executor = executor
        self._report_repo = report_repo
        self._projector_samples = projector_samples
        self._near_rank_ratio = near_rank_ratio

    def _trials(self, run: RunConfig) -> List[_Trial]:
        """
        All operators of the run, in report order. Gaussian trial t of dims
        pair i is drawn from stream (seed, i, t, 0) and checked with
        (seed, i, t, 1). The structured cases of pair i are built from
        (seed, i, trials) and checked with (seed, i, trials + 1 + k).
        """
        trials = []
        for i, (rows, cols) in enumerate(run.dims):
            for t in range(run.trials):
                operator = gaussian_operator(rng_for(run.seed, i, t, 0), rows, cols)
                trials.append(_Trial(f"gaussian {rows}x{cols} #{t}", operator, (i, t, 1)))
            structured = structured_operators(rng_for(run.seed, i, run.trials), rows, cols, self._near_rank_ratio)
            for k, (name, A) in enumerate(structured):
                trials.append(_Trial(f"{name} {rows}x{cols}", A, (i, run.trials + 1 + k)))
        return trials

    def _evaluate(self, run: RunConfig, trial: _Trial) -> List[CheckOutcome]:
        return safe_evaluate(trial.label, trial.operator, rng_for(run.seed, *trial.stream), run.tol)

    def execute(self, run: RunConfig) -> CheckIsoResult:
        """
        Run the suite and optionally write the report.
        A failed check is not an error: it shows up as `report.passed == False`.
        """
        started = time.perf_counter()
        executor = self._executor.with_single_thread(run.single_thread)
        trials = self._trials(run)
        logger.info(
            f"Running check-iso: seed {run.seed}, {len(trials)} operators over dims {run.dims}, "
            f"{'single thread' if executor.single_thread else 'thread pool'}"
        )

        try:
            per_trial = executor.map(lambda trial: self._evaluate(run, trial), trials)
            outcomes = [outcome for batch in per_trial for outcome in batch]

            suite_stream = len(run.dims)
            outcomes.append(riesz_identity_check(rng_for(run.seed, suite_stream, 0), run.dims[0][0], run.tol))
            outcomes.extend(projector_checks(
                rng_for(run.seed, suite_stream, 1),
                [cols for _, cols in run.dims],
                self._projector_samples,
                run.tol,
            ))
        except NumericsError as e:
            logger.error(f"check-iso aborted: {e}")
            return CheckIsoResult(success=False, error=str(e))

        records = aggregate(outcomes)
        report = Report.build(
            records,
            SuiteMetadata(
                command="check-iso",
                seed=run.seed,
                dims=list(run.dims),
                trials=run.trials,
                tol=run.tol,
                elapsed=round(time.perf_counter() - started, 6),
            ),
        )
        for record in report.failed():
            logger.warning(
                f"Check {record.name} failed: worst residual {record.worst_residual:.3e} "
                f"> threshold {record.threshold:.3e}"
            )
        logger.info(f"check-iso finished: {len(records)} checks, passed={report.passed}")

        written = None
        if run.report_path:
            try:
                written = self._report_repo.save(report, run.report_path)
            except OSError as e:
                return CheckIsoResult(success=False, report=report, error=str(e))
        return CheckIsoResult(success=True, report=report, report_path=written)


# ============================================================================
# pressure
# ============================================================================

@dataclass
class PressureResult:
    """Result of a pressure recovery from a force file."""
    success: bool
    solution: Optional[PressureSolution] = None
    continuity_constant: Optional[float] = None
    boundary_max: float = 0.0
    error: Optional[str] = None

    def summary(self) -> dict:
        """One-line JSON summary fields."""
        if not self.success or self.solution is None:
            return {"success": False, "error": self.error}
        return {
            "success": True,
            "residual": self.solution.residual,
            "relativeResidual": self.solution.relative_residual,
            "continuityConstant": self.continuity_constant,
            "solver": self.solution.path.value,
            "iterations": self.solution.iterations,
            "errorBound": self.solution.error_bound,
        }


class RecoverPressureUseCase:
    """Read a force field, recover its zero-mean pressure, write it out."""

    def __init__(
        self,
        field_repo: IFieldRepository,
        tol: float = DEFAULT_TOL,
        dense_max_cells: int = 1000,
        cg_rtol: float = 1e-10,
        cg_maxiter_factor: int = 10,
    ):
        self._field_repo = field_repo
        self._tol = tol
        self._dense_max_cells = dense_max_cells
        self._cg_rtol = cg_rtol
        self._cg_maxiter_factor = cg_maxiter_factor

    def execute(
        self,
        input_path: str,
        output_path: str,
        grid: Optional[Grid] = None,
        solver: SolverPath = SolverPath.AUTO,
    ) -> PressureResult:
        """
        Solve {-grad p = G, mean p = 0} for the force G in `input_path`.

        Args:
            input_path: Vector field file holding G
            output_path: Where to write the scalar field p
            grid: Grid the file must declare, if given
            solver: Solver path selection
        """
        try:
            force = self._field_repo.load(input_path, expected_grid=grid)
            if not isinstance(force, VectorField):
                return PressureResult(success=False, error=f"{input_path} holds a scalar field, expected a vector field")

            boundary = force.boundary_max_abs()
            if boundary > 0:
                logger.warning(
                    f"Force field has nonzero boundary-face entries (max {boundary:.3e}); "
                    f"they are ignored since velocities vanish on the border"
                )

            system = build_divergence(force.grid, self._tol)
            solution = recover_pressure(
                system,
                force,
                path=solver,
                dense_max_cells=self._dense_max_cells,
                cg_rtol=self._cg_rtol,
                cg_maxiter_factor=self._cg_maxiter_factor,
            )
            constant = continuity_constant(system) if solution.path is SolverPath.DENSE else None
            self._field_repo.save(output_path, solution.pressure)
        except (ValueError, OSError, NumericsError) as e:
            logger.error(f"Pressure recovery failed: {e}")
            return PressureResult(success=False, error=str(e))

        logger.info(
            f"Recovered pressure on {system.grid.counts} via {solution.path.value}, "
            f"incompatibility residual {solution.residual:.3e}"
        )
        return PressureResult(
            success=True,
            solution=solution,
            continuity_constant=constant,
            boundary_max=boundary,
        )


# ============================================================================
# mms
# ============================================================================

@dataclass
class MmsResult:
    """Result of a manufactured-solution convergence run."""
    success: bool
    report: Optional[Report] = None
    report_path: Optional[str] = None
    error: Optional[str] = None


def mms_grid(case: ManufacturedCase, n: int, lengths: Sequence[float] = (1.0, 1.0, 1.0)) -> Grid:
    """n cells along each axis the case varies on, one cell elsewhere."""
    counts = tuple(n if axis < case.axes else 1 for axis in range(3))
    return Grid.create(counts, tuple(lengths))


class MmsConvergenceUseCase:
    """Measure the L2 convergence order of pressure recovery on manufactured solutions."""

    def __init__(
        self,
        report_repo: IReportRepository,
        tol: float = DEFAULT_TOL,
        dense_max_cells: int = 1000,
        cg_rtol: float = 1e-10,
        cg_maxiter_factor: int = 10,
    ):
        self._report_repo = report_repo
        self._tol = tol
        self._dense_max_cells = dense_max_cells
        self._cg_rtol = cg_rtol
        self._cg_maxiter_factor = cg_maxiter_factor

    @staticmethod
    def validate(n_list: Sequence[int]) -> None:
        """
        Raises:
            ConfigError: empty, not strictly increasing, or a mesh below MMS_MIN_N
        """
        if not n_list:
            raise ConfigError("mesh list is empty")
        if any(n < MMS_MIN_N for n in n_list):
            raise ConfigError(f"every mesh size must be at least {MMS_MIN_N}, got {list(n_list)}")
        if not is_strictly_increasing(list(n_list)):
            raise ConfigError(f"mesh sizes must be strictly increasing, got {list(n_list)}")

    def execute(
        self,
        case: ManufacturedCase,
        n_list: Sequence[int],
        lengths: Sequence[float] = (1.0, 1.0, 1.0),
        solver: SolverPath = SolverPath.AUTO,
        report_path: Optional[str] = None,
    ) -> MmsResult:
        started = time.perf_counter()
        try:
            case = ManufacturedCase(case)
            self.validate(n_list)
            rows: List[MmsRow] = []
            for n in n_list:
                grid = mms_grid(case, n, lengths)
                exact = manufactured(grid, case)
                system = build_divergence(grid, self._tol)
                solution = recover_pressure(
                    system,
                    exact.force,
                    path=solver,
                    dense_max_cells=self._dense_max_cells,
                    cg_rtol=self._cg_rtol,
                    cg_maxiter_factor=self._cg_maxiter_factor,
                )
                error = l2_error(solution.pressure, exact.pressure)
                rows.append(MmsRow(n=n, cells=grid.n_cells, l2_error=error))
                logger.info(f"MMS {case.value} n={n}: L2 error {error:.6e} via {solution.path.value}")
        except (ValueError, NumericsError) as e:
            logger.error(f"MMS run failed: {e}")
            return MmsResult(success=False, error=str(e))

        records: List[CheckRecord] = []
        ratios: List[float] = []
        orders: List[float] = []
        for coarse, fine in zip(rows, rows[1:]):
            contraction = fine.l2_error / coarse.l2_error if coarse.l2_error > 0 else 0.0
            ratio = 1.0 / contraction if contraction > 0 else math.inf
            ratios.append(ratio)
            orders.append(math.log2(ratio) if np.isfinite(ratio) else math.inf)
            threshold = 1.0 / MMS_MIN_RATIO
            records.append(CheckRecord(
                name=f"error_ratio_{coarse.n}_{fine.n}",
                worst_residual=contraction,
                threshold=threshold,
                passed=contraction <= threshold,
            ))

        report = Report.build(
            records,
            SuiteMetadata(command="mms", elapsed=round(time.perf_counter() - started, 6)),
            mms=MmsTable(
                case=case.value,
                rows=rows,
                orders=orders,
                min_ratio=min(ratios) if ratios else None,
            ),
        )
        if not report.passed:
            logger.warning(f"MMS {case.value}: convergence below ratio {MMS_MIN_RATIO} (ratios {ratios})")

        written = None
        if report_path:
            try:
                written = self._report_repo.save(report, report_path)
            except OSError as e:
                return MmsResult(success=False, report=report, error=str(e))
        return MmsResult(success=True, report=report, report_path=written)
