"""
Validation of command-line flag values.
Each parser returns (is_valid, normalized_value, error_message).
"""
import re
from typing import List, Optional, Tuple


_DIM_PATTERN = re.compile(r'^(\d+)[xX](\d+)$')


def parse_dims(text: str) -> Tuple[bool, Optional[List[Tuple[int, int]]], Optional[str]]:
    """
    Parse an operator-dimension list.

    Valid formats:
        - 20x30
        - 20x30,50x80
        - 1X1

    Returns:
        Tuple of (is_valid, [(rows, cols), ...], error_message)
    """
    cleaned = re.sub(r'\s', '', text or "")
    if not cleaned:
        return False, None, "dims list is empty"

    dims: List[Tuple[int, int]] = []
    for item in cleaned.split(','):
        match = _DIM_PATTERN.match(item)
        if not match:
            return False, None, f"'{item}' is not of the form RxC"
        rows, cols = int(match.group(1)), int(match.group(2))
        if rows < 1 or cols < 1:
            return False, None, f"'{item}' has a zero dimension"
        dims.append((rows, cols))
    return True, dims, None


def parse_int_list(text: str) -> Tuple[bool, Optional[List[int]], Optional[str]]:
    """Parse a comma-separated list of integers, e.g. '8,16,32'."""
    cleaned = re.sub(r'\s', '', text or "")
    if not cleaned:
        return False, None, "integer list is empty"
    if not re.match(r'^\d+(,\d+)*$', cleaned):
        return False, None, f"'{text}' is not a comma-separated list of non-negative integers"
    return True, [int(v) for v in cleaned.split(',')], None


def parse_int_triple(text: str) -> Tuple[bool, Optional[Tuple[int, int, int]], Optional[str]]:
    """
    Parse cell counts 'NX,NY,NZ'. Missing trailing entries default to 1,
    so '8' and '8,8' describe 1D and 2D grids.
    """
    ok, values, error = parse_int_list(text)
    if not ok:
        return False, None, error
    if len(values) > 3:
        return False, None, f"'{text}' has more than three entries"
    if any(v < 1 for v in values):
        return False, None, "cell counts must be positive"
    values = values + [1] * (3 - len(values))
    return True, (values[0], values[1], values[2]), None


def parse_float_triple(text: str) -> Tuple[bool, Optional[Tuple[float, float, float]], Optional[str]]:
    """Parse domain lengths 'LX,LY,LZ'; missing trailing entries default to 1.0."""
    cleaned = re.sub(r'\s', '', text or "")
    if not cleaned:
        return False, None, "length list is empty"
    parts = cleaned.split(',')
    if len(parts) > 3:
        return False, None, f"'{text}' has more than three entries"
    try:
        values = [float(p) for p in parts]
    except ValueError:
        return False, None, f"'{text}' is not a list of numbers"
    if any(not (v > 0 and v != float('inf')) for v in values):
        return False, None, "lengths must be positive and finite"
    values = values + [1.0] * (3 - len(values))
    return True, (values[0], values[1], values[2]), None


def is_strictly_increasing(values: List[int]) -> bool:
    return all(a < b for a, b in zip(values, values[1:]))
