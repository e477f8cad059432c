"""
Field file adapter for reading and writing grid fields.

Layout:
    {"grid": {"nx": 2, "ny": 1, "nz": 1, "lx": 1.0, "ly": 1.0, "lz": 1.0}, "kind": "vector"}
    u
    0.0
    1.0
    0.0
    v
    ...
    w
    ...

Scalar files carry one value per line after the header. Vector files carry
three sections opened by `u`, `v`, `w`, each in row-major face order with
boundary faces included. Blank lines are skipped and `#` starts a comment line.
"""
import json
import logging
from pathlib import Path
from typing import Dict, List, Optional, Tuple, Union

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, ValidationError

from domain.entities import FieldKind, Grid, ScalarField, VectorField
from domain.exceptions import FieldFormatError, InvalidGridError
from domain.repositories import IFieldRepository

logger = logging.getLogger(__name__)

SECTIONS = ("u", "v", "w")


class GridHeader(BaseModel):
    model_config = ConfigDict(extra="forbid")

    nx: int = Field(ge=1)
    ny: int = Field(default=1, ge=1)
    nz: int = Field(default=1, ge=1)
    lx: float = Field(default=1.0, gt=0)
    ly: float = Field(default=1.0, gt=0)
    lz: float = Field(default=1.0, gt=0)


class FieldHeader(BaseModel):
    model_config = ConfigDict(extra="forbid")

    grid: GridHeader
    kind: FieldKind


AnyField = Union[ScalarField, VectorField]


class FieldFileAdapter(IFieldRepository):
    """Adapter for the plain-text field format."""

    def _content_lines(self, text: str) -> List[Tuple[int, str]]:
        """(1-based line number, stripped text) for every non-blank, non-comment line."""
        lines = []
        for number, raw in enumerate(text.splitlines(), start=1):
            stripped = raw.strip()
            if not stripped or stripped.startswith("#"):
                continue
            lines.append((number, stripped))
        return lines

    def _parse_header(self, number: int, text: str) -> Tuple[FieldHeader, Grid]:
        try:
            header = FieldHeader.model_validate(json.loads(text))
        except json.JSONDecodeError as e:
            raise FieldFormatError(f"header is not valid JSON: {e.msg}", number) from e
        except ValidationError as e:
            problem = e.errors()[0]
            where = ".".join(str(p) for p in problem["loc"])
            raise FieldFormatError(f"invalid header field {where}: {problem['msg']}", number) from e
        g = header.grid
        try:
            grid = Grid(nx=g.nx, ny=g.ny, nz=g.nz, lx=g.lx, ly=g.ly, lz=g.lz)
        except InvalidGridError as e:
            raise FieldFormatError(str(e), number) from e
        return header, grid

    def _parse_value(self, number: int, text: str) -> float:
        try:
            value = float(text)
        except ValueError:
            raise FieldFormatError(f"'{text}' is not a number", number)
        if not np.isfinite(value):
            raise FieldFormatError(f"non-finite value '{text}'", number)
        return value

    def _parse_vector(self, grid: Grid, body: List[Tuple[int, str]], end_line: int) -> VectorField:
        sections: Dict[str, List[float]] = {}
        opened: Dict[str, int] = {}
        current: Optional[str] = None
        for number, text in body:
            if text in SECTIONS:
                expected = SECTIONS[len(sections)] if len(sections) < len(SECTIONS) else None
                if text != expected:
                    raise FieldFormatError(f"section '{text}' out of order (expected '{expected}')", number)
                current = text
                sections[current] = []
                opened[current] = number
                continue
            if current is None:
                raise FieldFormatError("value before the first section marker 'u'", number)
            sections[current].append(self._parse_value(number, text))

        missing = [s for s in SECTIONS if s not in sections]
        if missing:
            raise FieldFormatError(f"missing section(s) {', '.join(missing)}", end_line)

        components = []
        for name, shape in zip(SECTIONS, grid.face_shapes):
            values = sections[name]
            size = int(np.prod(shape))
            if len(values) != size:
                raise FieldFormatError(
                    f"section '{name}' has {len(values)} values, grid needs {size}", opened[name]
                )
            components.append(np.array(values).reshape(shape))
        return VectorField(grid, *components)

    def _parse_scalar(self, grid: Grid, body: List[Tuple[int, str]], end_line: int) -> ScalarField:
        values = [self._parse_value(number, text) for number, text in body]
        if len(values) != grid.n_cells:
            line = body[grid.n_cells][0] if len(values) > grid.n_cells else end_line
            raise FieldFormatError(f"scalar field has {len(values)} values, grid needs {grid.n_cells}", line)
        return ScalarField(grid, np.array(values))

    def parse(self, text: str) -> AnyField:
        """
        Parse field file contents.

        Raises:
            FieldFormatError: malformed header or payload (with line number)
        """
        lines = self._content_lines(text)
        if not lines:
            raise FieldFormatError("file is empty")
        end_line = max(len(text.splitlines()), 1)
        header, grid = self._parse_header(*lines[0])
        body = lines[1:]
        if header.kind is FieldKind.SCALAR:
            return self._parse_scalar(grid, body, end_line)
        return self._parse_vector(grid, body, end_line)

    def load(self, path: str, expected_grid: Optional[Grid] = None) -> AnyField:
        """
        Read a field file.

        Args:
            path: File to read
            expected_grid: Grid the file must declare, if given

        Raises:
            FieldFormatError: malformed file
            InvalidGridError: declared grid differs from expected_grid
            OSError: unreadable file
        """
        text = Path(path).read_text(encoding="utf-8")
        field = self.parse(text)
        if expected_grid is not None and field.grid != expected_grid:
            raise InvalidGridError(
                f"{path} declares grid {field.grid.counts} with lengths {field.grid.lengths}, "
                f"expected {expected_grid.counts} with lengths {expected_grid.lengths}"
            )
        logger.info(f"Loaded {type(field).__name__} on {field.grid.counts} from {path}")
        return field

    def render(self, field: AnyField) -> str:
        """Field file contents; values use repr so they parse back exactly."""
        kind = FieldKind.SCALAR if isinstance(field, ScalarField) else FieldKind.VECTOR
        lines = [json.dumps({"grid": field.grid.to_dict(), "kind": kind.value})]
        if isinstance(field, ScalarField):
            lines.extend(repr(float(v)) for v in field.flat())
        else:
            for name, component in zip(SECTIONS, field.components()):
                lines.append(name)
                lines.extend(repr(float(v)) for v in component.ravel())
        return "\n".join(lines) + "\n"

    def save(self, path: str, field: AnyField) -> None:
        Path(path).write_text(self.render(field), encoding="utf-8")
        logger.info(f"Wrote {type(field).__name__} on {field.grid.counts} to {path}")
