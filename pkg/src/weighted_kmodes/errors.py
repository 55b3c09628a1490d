"""
Exception hierarchy for the weighted k-modes package.

Every error raised on purpose by the library derives from WeightedKModesError,
so callers (the CLI in particular) can tell library failures from bugs.
"""

from __future__ import annotations

from typing import Optional


class WeightedKModesError(Exception):
    """Base class for all library errors."""


class InputError(WeightedKModesError, ValueError):
    """Input data is empty or inconsistent."""


class DataFormatError(InputError):
    """A data file does not follow its declared table format."""

    def __init__(self, message: str, row_index: Optional[int] = None, source: Optional[str] = None):
        self.row_index = row_index
        self.source = source
        location = []
        if source:
            location.append(str(source))
        if row_index is not None:
            location.append(f"row {row_index}")
        prefix = f"{', '.join(location)}: " if location else ""
        super().__init__(f"{prefix}{message}")


class ConfigError(WeightedKModesError, ValueError):
    """A configuration value is out of range or unknown."""


class ValueIndexError(WeightedKModesError, IndexError):
    """An attribute index or value id is out of range."""


class PreconditionError(WeightedKModesError, ValueError):
    """An operation was called outside its domain."""


class DegenerateClusterError(WeightedKModesError, RuntimeError):
    """A cluster is empty where a non-empty cluster is required."""

    def __init__(self, cluster: int, message: Optional[str] = None):
        self.cluster = cluster
        super().__init__(message or f"cluster {cluster} is empty")


class RunError(WeightedKModesError, RuntimeError):
    """A clustering run could not complete."""


__all__ = [
    "WeightedKModesError",
    "InputError",
    "DataFormatError",
    "ConfigError",
    "ValueIndexError",
    "PreconditionError",
    "DegenerateClusterError",
    "RunError",
]
