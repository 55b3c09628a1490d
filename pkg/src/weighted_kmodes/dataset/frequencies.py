"""
Global value frequencies f(a|D) and More Similar Attribute Value Sets.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import FrozenSet, Tuple

import numpy as np

from ..errors import InputError, ValueIndexError
from .table import EncodedDataset


@dataclass(frozen=True, eq=False)
class GlobalFrequencyTable:
    """Occurrence count of every attribute value over the whole dataset."""
    counts: Tuple[np.ndarray, ...]
    n: int

    def __post_init__(self) -> None:
        frozen = []
        for j, column in enumerate(self.counts):
            column = np.array(column, dtype=np.int64, copy=True)
            if int(column.sum()) != self.n:
                raise InputError(f"attribute {j} counts sum to {int(column.sum())}, expected {self.n}")
            if (column < 1).any():
                raise InputError(f"attribute {j} tabulates a value that never occurs")
            column.flags.writeable = False
            frozen.append(column)
        object.__setattr__(self, "counts", tuple(frozen))

    @property
    def attribute_count(self) -> int:
        return len(self.counts)

    def count(self, attribute: int, value: int) -> int:
        self._check(attribute, value)
        return int(self.counts[attribute][value])

    def msavs(self, attribute: int, value: int) -> FrozenSet[int]:
        return msavs(self, attribute, value)

    def _check(self, attribute: int, value: int) -> None:
        if not 0 <= attribute < len(self.counts):
            raise ValueIndexError(f"attribute {attribute} out of range [0, {len(self.counts)})")
        if not 0 <= value < len(self.counts[attribute]):
            raise ValueIndexError(
                f"value id {value} out of range [0, {len(self.counts[attribute])}) for attribute {attribute}"
            )


def global_frequencies(data: EncodedDataset) -> GlobalFrequencyTable:
    """Count every (attribute, value id) pair in one pass over the columns."""
    counts = tuple(
        np.bincount(data.rows[:, j], minlength=p) for j, p in enumerate(data.schema.cardinalities)
    )
    return GlobalFrequencyTable(counts=counts, n=data.n)


def msavs(freq: GlobalFrequencyTable, attribute: int, value: int) -> FrozenSet[int]:
    """Values of the same attribute whose global frequency is at most f(value|D)."""
    freq._check(attribute, value)
    column = freq.counts[attribute]
    return frozenset(int(t) for t in np.flatnonzero(column <= column[value]))
