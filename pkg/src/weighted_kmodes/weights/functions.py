"""
Weighting functions omega(a, l) for the five schemas.

Scalar `weight` and vectorised `weight_matrix` evaluate the same
expressions in the same order, so their results agree bit for bit.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

from ..dataset import GlobalFrequencyTable
from ..errors import DegenerateClusterError, PreconditionError, ValueIndexError
from .schema import WeightingSchema
from .snapshot import ClusterFrequencySnapshot


@dataclass(frozen=True, eq=False)
class StaticWeightTable:
    """Goodall weights g(a) per attribute value; cluster independent."""
    weights: Tuple[np.ndarray, ...]

    def __post_init__(self) -> None:
        frozen = []
        for column in self.weights:
            column = np.array(column, dtype=np.float64, copy=True)
            column.flags.writeable = False
            frozen.append(column)
        object.__setattr__(self, "weights", tuple(frozen))

    def value(self, attribute: int, value: int) -> float:
        return float(self.weights[attribute][value])


def build_static_weights(freq: GlobalFrequencyTable) -> StaticWeightTable:
    """
    Goodall weights from global frequencies.

    g(a_r) = 1 - sum over t in MSAVS(a_r) of f_t (f_t - 1) / (n (n - 1)),
    evaluated with one frequency-sorted cumulative sum per attribute.
    """
    n = freq.n
    if n < 2:
        raise PreconditionError(f"Goodall weights need at least 2 objects, got {n}")
    denominator = n * (n - 1)
    tables = []
    for counts in freq.counts:
        order = np.argsort(counts, kind="stable")
        ranked = counts[order]
        cumulative = np.cumsum(ranked * (ranked - 1))
        # last position holding a count <= f(a_r|D)
        last = np.searchsorted(ranked, counts, side="right") - 1
        tables.append(1.0 - cumulative[last] / denominator)
    return StaticWeightTable(weights=tuple(tables))


def weight(
    schema: WeightingSchema,
    attribute: int,
    value: int,
    cluster: int,
    snapshot: Optional[ClusterFrequencySnapshot] = None,
    static_table: Optional[StaticWeightTable] = None,
    freq: Optional[GlobalFrequencyTable] = None,
) -> float:
    """Weight of one attribute value in one cluster."""
    if schema is WeightingSchema.UNIT:
        return 1.0
    if schema is WeightingSchema.WF2:
        _require(static_table, "WF2 needs the static weight table")
        _check_value(static_table.weights, attribute, value)
        return float(static_table.weights[attribute][value])

    _require(snapshot, f"{schema.name} needs a cluster frequency snapshot")
    _check_value(snapshot.counts, attribute, value, cluster)
    size = int(snapshot.sizes[cluster])
    if size == 0:
        raise DegenerateClusterError(cluster, f"cluster {cluster} is empty under dynamic schema {schema.name}")
    in_cluster = float(snapshot.counts[attribute][cluster, value])
    relative = in_cluster / float(size)
    if schema is WeightingSchema.WF1:
        return relative
    if schema is WeightingSchema.WF3:
        _require(static_table, "WF3 needs the static weight table")
        return relative * float(static_table.weights[attribute][value])
    _require(freq, "WF4 needs the global frequency table")
    return in_cluster / (float(size) * float(freq.counts[attribute][value]))


def weight_matrix(
    schema: WeightingSchema,
    attribute: int,
    snapshot: Optional[ClusterFrequencySnapshot] = None,
    static_table: Optional[StaticWeightTable] = None,
    freq: Optional[GlobalFrequencyTable] = None,
    k: Optional[int] = None,
    cardinality: Optional[int] = None,
) -> np.ndarray:
    """
    k x p_j matrix of omega(a_j^(t), l).

    For Unit and WF2 the snapshot may be omitted; `k` and `cardinality`
    then give the shape.
    """
    if snapshot is not None:
        k = snapshot.k
        cardinality = snapshot.counts[attribute].shape[1]
    if schema is WeightingSchema.UNIT:
        if cardinality is None and static_table is not None:
            cardinality = static_table.weights[attribute].shape[0]
        if k is None or cardinality is None:
            raise PreconditionError("unit weights need the matrix shape (k, p_j)")
        return np.ones((k, cardinality), dtype=np.float64)
    if schema is WeightingSchema.WF2:
        _require(static_table, "WF2 needs the static weight table")
        if k is None:
            raise PreconditionError("static weights need the cluster count k")
        return np.tile(static_table.weights[attribute], (k, 1))

    _require(snapshot, f"{schema.name} needs a cluster frequency snapshot")
    empty = snapshot.empty_clusters
    if empty.size:
        raise DegenerateClusterError(int(empty[0]), f"cluster {int(empty[0])} is empty under dynamic schema {schema.name}")
    in_cluster = snapshot.counts[attribute].astype(np.float64)
    sizes = snapshot.sizes.astype(np.float64)[:, None]
    relative = in_cluster / sizes
    if schema is WeightingSchema.WF1:
        return relative
    if schema is WeightingSchema.WF3:
        _require(static_table, "WF3 needs the static weight table")
        return relative * static_table.weights[attribute][None, :]
    _require(freq, "WF4 needs the global frequency table")
    return in_cluster / (sizes * freq.counts[attribute].astype(np.float64)[None, :])


def _require(table: object, message: str) -> None:
    if table is None:
        raise PreconditionError(message)


def _check_value(columns, attribute: int, value: int, cluster: Optional[int] = None) -> None:
    if not 0 <= attribute < len(columns):
        raise ValueIndexError(f"attribute {attribute} out of range [0, {len(columns)})")
    width = columns[attribute].shape[-1]
    if not 0 <= value < width:
        raise ValueIndexError(f"value id {value} out of range [0, {width}) for attribute {attribute}")
    if cluster is not None and not 0 <= cluster < columns[attribute].shape[0]:
        raise ValueIndexError(f"cluster {cluster} out of range")
