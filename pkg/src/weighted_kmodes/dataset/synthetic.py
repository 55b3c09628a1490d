"""
Generated categorical datasets for tests and scalability runs.
"""

from __future__ import annotations

from typing import Sequence

import numpy as np

from ..errors import ConfigError
from .table import AttributeSchema, EncodedDataset, LabeledDataset

# Domain sizes of the eight Nursery attributes
NURSERY_CARDINALITIES = (3, 5, 4, 4, 3, 2, 3, 3)


def _schema(cardinalities: Sequence[int]) -> AttributeSchema:
    return AttributeSchema(values=tuple(tuple(f"v{t}" for t in range(p)) for p in cardinalities))


def _compact(rows: np.ndarray) -> EncodedDataset:
    """Relabel each column in first-occurrence order so ids are dense."""
    encoded = np.empty_like(rows)
    values = []
    for j in range(rows.shape[1]):
        uniques, first, inverse = np.unique(rows[:, j], return_index=True, return_inverse=True)
        order = np.argsort(first, kind="stable")
        rank = np.empty_like(order)
        rank[order] = np.arange(order.size)
        encoded[:, j] = rank[inverse]
        values.append(tuple(f"v{int(uniques[t])}" for t in order))
    return EncodedDataset(rows=encoded, schema=AttributeSchema(values=tuple(values)))


def random_dataset(n: int, cardinalities: Sequence[int], seed: int = 0) -> EncodedDataset:
    """Uniformly random cells, re-encoded so every tabulated value occurs."""
    if n < 1 or not cardinalities or min(cardinalities) < 1:
        raise ConfigError("need n >= 1 and at least one attribute with a non-empty domain")
    rng = np.random.default_rng(seed)
    rows = np.column_stack([rng.integers(0, p, size=n) for p in cardinalities])
    return _compact(rows)


def grouped_dataset(group_sizes: Sequence[int], m: int = 3) -> LabeledDataset:
    """
    k groups of identical rows with disjoint values, one class per group.

    Every attribute of group g takes value g, so any two groups differ
    on every attribute.
    """
    if not group_sizes or min(group_sizes) < 1 or m < 1:
        raise ConfigError("need at least one non-empty group and one attribute")
    labels = np.repeat(np.arange(len(group_sizes)), group_sizes)
    rows = np.repeat(labels[:, None], m, axis=1)
    return LabeledDataset(
        data=EncodedDataset(rows=rows, schema=_schema([len(group_sizes)] * m)),
        labels=labels,
        class_names=tuple(f"g{g}" for g in range(len(group_sizes))),
    )


def planted_dataset(
    n: int = 12960,
    cardinalities: Sequence[int] = NURSERY_CARDINALITIES,
    class_count: int = 5,
    noise: float = 0.3,
    seed: int = 0,
) -> LabeledDataset:
    """
    Labelled data drawn around one random prototype row per class.

    Each cell copies its class prototype with probability 1 - noise and is
    uniform over the attribute domain otherwise.
    """
    if class_count < 1 or n < class_count:
        raise ConfigError("need 1 <= class_count <= n")
    if not 0.0 <= noise <= 1.0:
        raise ConfigError(f"noise must be in [0, 1], got {noise}")
    rng = np.random.default_rng(seed)
    m = len(cardinalities)
    high = np.asarray(cardinalities)
    prototypes = rng.integers(0, high, size=(class_count, m))
    labels = rng.integers(0, class_count, size=n)
    labels[:class_count] = np.arange(class_count)
    rows = prototypes[labels].copy()
    flip = rng.random((n, m)) < noise
    rows[flip] = rng.integers(0, np.broadcast_to(high, (n, m))[flip])
    data = _compact(rows)
    return LabeledDataset(
        data=data,
        labels=labels,
        class_names=tuple(f"c{c}" for c in range(class_count)),
    )
