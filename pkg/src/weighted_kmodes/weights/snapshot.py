"""
Per-cluster value frequency snapshot.

Holds |C_l| and f(a|C_l) for the partition of a single run and keeps them
current with delta updates when objects move between clusters.
"""

from __future__ import annotations

from typing import List

import numpy as np

from ..dataset import EncodedDataset
from ..errors import InputError


class ClusterFrequencySnapshot:
    """Cluster sizes and per-(cluster, attribute) value counts."""

    def __init__(self, sizes: np.ndarray, counts: List[np.ndarray]):
        self.sizes = np.asarray(sizes, dtype=np.int64)
        self.counts = [np.asarray(c, dtype=np.int64) for c in counts]
        self.k = int(self.sizes.shape[0])
        for j, column in enumerate(self.counts):
            if column.ndim != 2 or column.shape[0] != self.k:
                raise InputError(f"counts for attribute {j} must have shape (k, p_j)")

    @classmethod
    def from_membership(cls, data: EncodedDataset, membership: np.ndarray, k: int) -> "ClusterFrequencySnapshot":
        """Tabulate a partition from scratch."""
        membership = np.asarray(membership, dtype=np.int64)
        if membership.shape != (data.n,):
            raise InputError(f"membership has {membership.size} entries, dataset has {data.n} objects")
        if (membership < 0).any() or (membership >= k).any():
            raise InputError(f"cluster index outside [0, {k})")
        sizes = np.bincount(membership, minlength=k)
        counts = []
        for j, p in enumerate(data.schema.cardinalities):
            column = np.zeros((k, p), dtype=np.int64)
            np.add.at(column, (membership, data.rows[:, j]), 1)
            counts.append(column)
        return cls(sizes, counts)

    @property
    def n(self) -> int:
        return int(self.sizes.sum())

    @property
    def empty_clusters(self) -> np.ndarray:
        return np.flatnonzero(self.sizes == 0)

    def size(self, cluster: int) -> int:
        return int(self.sizes[cluster])

    def count(self, cluster: int, attribute: int, value: int) -> int:
        return int(self.counts[attribute][cluster, value])

    def apply_moves(self, data: EncodedDataset, old: np.ndarray, new: np.ndarray) -> int:
        """
        Move objects whose cluster changed between two memberships.

        Returns:
            Number of objects moved
        """
        moved = np.flatnonzero(old != new)
        if moved.size == 0:
            return 0
        source = old[moved]
        target = new[moved]
        np.subtract.at(self.sizes, source, 1)
        np.add.at(self.sizes, target, 1)
        for j, column in enumerate(self.counts):
            values = data.rows[moved, j]
            np.subtract.at(column, (source, values), 1)
            np.add.at(column, (target, values), 1)
        return int(moved.size)

    def is_consistent(self, n: int) -> bool:
        """Counts of every non-empty cluster sum to its size and sizes sum to n."""
        if int(self.sizes.sum()) != n or (self.sizes < 0).any():
            return False
        return all(
            (column >= 0).all() and np.array_equal(column.sum(axis=1), self.sizes) for column in self.counts
        )

    def copy(self) -> "ClusterFrequencySnapshot":
        return ClusterFrequencySnapshot(self.sizes.copy(), [c.copy() for c in self.counts])

    def __repr__(self) -> str:
        return f"ClusterFrequencySnapshot(k={self.k}, sizes={self.sizes.tolist()})"
