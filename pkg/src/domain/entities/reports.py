"""
Run configuration and verification report models.
pydantic validates the run configuration and fixes the report's JSON schema.
"""
from typing import List, Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field, field_validator

from domain.value_objects.tolerances import DEFAULT_TOL


class RunConfig(BaseModel):
    """Configuration of one `check-iso` run."""
    model_config = ConfigDict(frozen=True)

    seed: int = Field(default=0, ge=0, lt=2**64)
    trials: int = Field(default=1, ge=1)
    dims: List[Tuple[int, int]] = Field(default_factory=lambda: [(20, 30)], min_length=1)
    tol: float = Field(default=DEFAULT_TOL, gt=0)
    report_path: Optional[str] = None
    single_thread: bool = False

    @field_validator("dims")
    @classmethod
    def _positive_dims(cls, value: List[Tuple[int, int]]) -> List[Tuple[int, int]]:
        for rows, cols in value:
            if rows < 1 or cols < 1:
                raise ValueError(f"operator dimensions must be positive, got {rows}x{cols}")
        return value


class CheckRecord(BaseModel):
    """Worst outcome of one named check across all trials it ran on."""
    model_config = ConfigDict(populate_by_name=True, frozen=True)

    name: str
    worst_residual: float = Field(alias="worstResidual")
    threshold: float
    passed: bool = Field(alias="pass")
    trials: int = 1


class MmsRow(BaseModel):
    """Error of the recovered pressure on one mesh."""
    model_config = ConfigDict(populate_by_name=True, frozen=True)

    n: int
    cells: int
    l2_error: float = Field(alias="l2Error")


class MmsTable(BaseModel):
    """Convergence table of a manufactured-solution run."""
    model_config = ConfigDict(populate_by_name=True)

    case: str
    rows: List[MmsRow] = Field(default_factory=list)
    orders: List[float] = Field(default_factory=list)
    min_ratio: Optional[float] = Field(default=None, alias="minRatio")


class SuiteMetadata(BaseModel):
    """Everything needed to reproduce the run; `elapsed` is the only nondeterministic field."""
    model_config = ConfigDict(populate_by_name=True)

    command: str
    seed: Optional[int] = None
    dims: List[Tuple[int, int]] = Field(default_factory=list)
    trials: Optional[int] = None
    tol: Optional[float] = None
    elapsed: float = 0.0


class Report(BaseModel):
    """Verification report; passes iff every record passes."""
    model_config = ConfigDict(populate_by_name=True)

    passed: bool
    records: List[CheckRecord]
    metadata: SuiteMetadata
    mms: Optional[MmsTable] = None

    @classmethod
    def build(
        cls,
        records: List[CheckRecord],
        metadata: SuiteMetadata,
        mms: Optional[MmsTable] = None,
    ) -> "Report":
        """Factory that derives the overall verdict from the records."""
        return cls(passed=all(r.passed for r in records), records=records, metadata=metadata, mms=mms)

    def failed(self) -> List[CheckRecord]:
        return [r for r in self.records if not r.passed]

    def to_json(self) -> str:
        """Stable JSON rendering (aliased keys, fixed field order)."""
        return self.model_dump_json(by_alias=True, indent=2) + "\n"
