"""
Dependency injection container for the application.
Wires up all components following Clean Architecture.
"""
import logging
from dataclasses import dataclass
from typing import Optional

from config import Config, load_config
from infrastructure.repositories import JsonReportRepository
from infrastructure.adapters import FieldFileAdapter
from infrastructure.scheduler import TrialExecutor
from application.use_cases import (
    CheckIsoUseCase,
    RecoverPressureUseCase,
    MmsConvergenceUseCase,
)

logger = logging.getLogger(__name__)


@dataclass
class Container:
    """Dependency injection container holding all application components."""
    config: Config

    # Repositories
    report_repo: JsonReportRepository

    # Adapters
    field_repo: FieldFileAdapter

    # Scheduler
    executor: TrialExecutor

    # Use Cases
    check_iso: CheckIsoUseCase
    recover_pressure: RecoverPressureUseCase
    mms_convergence: MmsConvergenceUseCase


def create_container(app_config: Optional[Config] = None) -> Container:
    """
    Create the dependency injection container.

    Args:
        app_config: Application configuration (defaults to built-in settings)

    Returns:
        Fully initialized Container
    """
    if app_config is None:
        app_config = load_config()

    logger.debug("Initializing dependency injection container...")

    report_repo = JsonReportRepository()
    field_repo = FieldFileAdapter()
    executor = TrialExecutor(max_workers=app_config.suite.max_workers)

    solver = app_config.solver
    tol = app_config.numerics.default_tol

    check_iso = CheckIsoUseCase(
        executor=executor,
        report_repo=report_repo,
        projector_samples=app_config.suite.projector_samples,
        near_rank_ratio=app_config.suite.near_rank_ratio,
    )
    recover_pressure = RecoverPressureUseCase(
        field_repo,
        tol=tol,
        dense_max_cells=solver.dense_max_cells,
        cg_rtol=solver.cg_rtol,
        cg_maxiter_factor=solver.cg_maxiter_factor,
    )
    mms_convergence = MmsConvergenceUseCase(
        report_repo,
        tol=tol,
        dense_max_cells=solver.dense_max_cells,
        cg_rtol=solver.cg_rtol,
        cg_maxiter_factor=solver.cg_maxiter_factor,
    )

    return Container(
        config=app_config,
        report_repo=report_repo,
        field_repo=field_repo,
        executor=executor,
        check_iso=check_iso,
        recover_pressure=recover_pressure,
        mms_convergence=mms_convergence,
    )


def shutdown_container(container: Container) -> None:
    """Flush log handlers; the container holds no other resources."""
    for handler in logging.getLogger().handlers:
        handler.flush()
    logger.debug("Container shut down")
