"""
Configuration module for the verification harness.
Settings come from an optional dotenv-format file; the process environment is
never consulted, so runs reproduce from their flags and settings file alone.
"""
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Dict, Optional, TypeVar

from dotenv import dotenv_values

from domain.exceptions import ConfigError

T = TypeVar("T")


@dataclass(frozen=True)
class NumericsConfig:
    """Rank threshold shared by every decomposition."""
    default_tol: float = 1e-10


@dataclass(frozen=True)
class SolverConfig:
    """Pressure solver selection and CG controls."""
    dense_max_cells: int = 1000
    cg_rtol: float = 1e-10
    cg_maxiter_factor: int = 10


@dataclass(frozen=True)
class SuiteConfig:
    """Sizes of the randomized check suites."""
    max_workers: int = 4
    projector_samples: int = 50
    near_rank_ratio: float = 1e-8


@dataclass(frozen=True)
class LoggingConfig:
    level: str = "INFO"
    log_file: str = ""


@dataclass(frozen=True)
class Config:
    """Main application configuration."""
    numerics: NumericsConfig = field(default_factory=NumericsConfig)
    solver: SolverConfig = field(default_factory=SolverConfig)
    suite: SuiteConfig = field(default_factory=SuiteConfig)
    logging: LoggingConfig = field(default_factory=LoggingConfig)


def _read(values: Dict[str, Optional[str]], key: str, parse: Callable[[str], T], default: T) -> T:
    raw = values.get(key)
    if raw is None or raw.strip() == "":
        return default
    try:
        return parse(raw.strip())
    except ValueError as e:
        raise ConfigError(f"{key}: cannot parse {raw!r} ({e})") from e


def _positive(parse: Callable[[str], T]) -> Callable[[str], T]:
    def checked(raw: str) -> T:
        value = parse(raw)
        if not value > 0:
            raise ValueError("must be positive")
        return value
    return checked


def load_config(settings_file: Optional[str] = None) -> Config:
    """
    Load configuration from a settings file (KEY=VALUE lines).
    With no file every setting takes its default.

    Raises:
        ConfigError: missing file or unparsable value
    """
    values: Dict[str, Optional[str]] = {}
    if settings_file:
        if not Path(settings_file).is_file():
            raise ConfigError(f"settings file not found: {settings_file}")
        values = dotenv_values(settings_file)

    level = _read(values, "LOG_LEVEL", str.upper, "INFO")
    if level not in ("DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"):
        raise ConfigError(f"LOG_LEVEL: unknown level {level!r}")

    return Config(
        numerics=NumericsConfig(
            default_tol=_read(values, "RIESZ_DEFAULT_TOL", _positive(float), 1e-10),
        ),
        solver=SolverConfig(
            dense_max_cells=_read(values, "SOLVER_DENSE_MAX_CELLS", _positive(int), 1000),
            cg_rtol=_read(values, "SOLVER_CG_RTOL", _positive(float), 1e-10),
            cg_maxiter_factor=_read(values, "SOLVER_CG_MAXITER_FACTOR", _positive(int), 10),
        ),
        suite=SuiteConfig(
            max_workers=_read(values, "SUITE_MAX_WORKERS", _positive(int), 4),
            projector_samples=_read(values, "SUITE_PROJECTOR_SAMPLES", _positive(int), 50),
            near_rank_ratio=_read(values, "SUITE_NEAR_RANK_RATIO", _positive(float), 1e-8),
        ),
        logging=LoggingConfig(
            level=level,
            log_file=_read(values, "LOG_FILE", str, ""),
        ),
    )
