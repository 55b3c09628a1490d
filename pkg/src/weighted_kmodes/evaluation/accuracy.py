"""
Clustering accuracy against ground-truth class labels.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence, Tuple

import numpy as np
from scipy.optimize import linear_sum_assignment

from ..errors import InputError


@dataclass(frozen=True, eq=False)
class AccuracyReport:
    """Accuracy r with the per-cluster dominant classes it was computed from."""
    accuracy: float
    dominant_classes: Tuple[int, ...]
    dominant_counts: Tuple[int, ...]
    contingency: np.ndarray

    @property
    def n(self) -> int:
        return int(self.contingency.sum())

    def to_dict(self) -> dict:
        return {
            "accuracy": self.accuracy,
            "dominant_classes": list(self.dominant_classes),
            "dominant_counts": list(self.dominant_counts),
            "contingency": self.contingency.tolist(),
        }


def contingency_matrix(
    membership: Sequence[int], labels: Sequence[int], k: int, class_count: int
) -> np.ndarray:
    """k x class_count table of objects per (cluster, class)."""
    membership = np.asarray(membership, dtype=np.int64)
    labels = np.asarray(labels, dtype=np.int64)
    if membership.shape != labels.shape or membership.ndim != 1:
        raise InputError(f"membership ({membership.size}) and labels ({labels.size}) differ in length")
    if membership.size == 0:
        raise InputError("cannot score an empty partition")
    if (membership < 0).any() or (membership >= k).any():
        raise InputError(f"cluster index outside [0, {k})")
    if (labels < 0).any() or (labels >= class_count).any():
        raise InputError(f"class id outside [0, {class_count})")
    table = np.zeros((k, class_count), dtype=np.int64)
    np.add.at(table, (membership, labels), 1)
    return table


def clustering_accuracy(
    membership: Sequence[int], labels: Sequence[int], k: int, class_count: int
) -> AccuracyReport:
    """
    Share of objects carrying the dominant class of their cluster.

    Clusters are scored independently (no one-to-one matching), and an
    empty cluster contributes nothing.
    """
    table = contingency_matrix(membership, labels, k, class_count)
    dominant = table.argmax(axis=1)
    counts = table.max(axis=1)
    return AccuracyReport(
        accuracy=float(counts.sum()) / float(table.sum()),
        dominant_classes=tuple(int(c) for c in dominant),
        dominant_counts=tuple(int(c) for c in counts),
        contingency=table,
    )


def matched_accuracy(
    membership: Sequence[int], labels: Sequence[int], k: int, class_count: int
) -> float:
    """Accuracy under the best one-to-one cluster/class matching."""
    table = contingency_matrix(membership, labels, k, class_count)
    rows, cols = linear_sum_assignment(table, maximize=True)
    return float(table[rows, cols].sum()) / float(table.sum())
