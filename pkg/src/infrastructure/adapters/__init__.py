"""Adapters package."""
from infrastructure.adapters.field_file_adapter import FieldFileAdapter

__all__ = [
    "FieldFileAdapter",
]
