"""
Alternating-minimization clustering loop for k-modes and its weighted variants.

One iteration updates the centers from the partition (exact maximisation of
f(a|C_l) * omega(a, l)), records the objective, then reassigns every object
to its nearest center under the weights frozen at the start of the
iteration. Cluster frequency counts are maintained incrementally.

A run stops when new centers leave the cost of the current partition
unchanged or when reassignment moves nothing; either way it returns that
partition together with the centers updated from it.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field
from typing import Optional, Sequence, Tuple, Union

import numpy as np

from ...utils import get_logger
from ..dataset import EncodedDataset, GlobalFrequencyTable, global_frequencies
from ..errors import ConfigError, DegenerateClusterError, RunError
from ..weights import (
    ClusterFrequencySnapshot,
    StaticWeightTable,
    WeightingSchema,
    build_static_weights,
    weight,
    weight_matrix,
)

logger = get_logger(__name__)

Centers = np.ndarray
Membership = np.ndarray

_OBJECTIVE_TOLERANCE = 1e-12


@dataclass(frozen=True, eq=False)
class RunConfig:
    """Parameters of a single clustering run."""
    k: int
    schema: WeightingSchema = WeightingSchema.UNIT
    max_iterations: int = 100
    seed: int = 0
    initial_centers: Optional[np.ndarray] = None

    def __post_init__(self) -> None:
        if isinstance(self.schema, str):
            object.__setattr__(self, "schema", WeightingSchema.from_name(self.schema))
        if self.k < 1:
            raise ConfigError(f"k must be at least 1, got {self.k}")
        if self.max_iterations < 1:
            raise ConfigError(f"max_iterations must be at least 1, got {self.max_iterations}")
        if self.initial_centers is not None:
            centers = np.array(self.initial_centers, dtype=np.int64, copy=True)
            if centers.ndim != 2 or centers.shape[0] != self.k:
                raise ConfigError(f"initial centers must be a {self.k} x m matrix")
            centers.flags.writeable = False
            object.__setattr__(self, "initial_centers", centers)


@dataclass(frozen=True, eq=False)
class RunResult:
    """Outcome of one clustering run."""
    membership: Membership
    centers: Centers
    objective_trace: Tuple[float, ...]
    iterations: int
    converged: bool
    wall_time: float
    schema: WeightingSchema = WeightingSchema.UNIT
    preprocess_time: float = 0.0
    initial_centers: Optional[Centers] = None
    repairs: int = 0
    stop_reason: str = "max_iterations"

    @property
    def objective(self) -> float:
        return self.objective_trace[-1] if self.objective_trace else math.nan

    @property
    def k(self) -> int:
        return int(self.centers.shape[0])


@dataclass(frozen=True, eq=False)
class WeightingContext:
    """Everything the distance needs: schema, global tables and a frozen snapshot."""
    schema: WeightingSchema = WeightingSchema.UNIT
    freq: Optional[GlobalFrequencyTable] = None
    static_table: Optional[StaticWeightTable] = None
    snapshot: Optional[ClusterFrequencySnapshot] = None

    def center_weights(self, centers: Centers) -> np.ndarray:
        """k x m matrix of omega(z_lj, l)."""
        k, m = centers.shape
        if self.schema is WeightingSchema.UNIT:
            return np.ones((k, m), dtype=np.float64)
        clusters = np.arange(k)
        out = np.empty((k, m), dtype=np.float64)
        for j in range(m):
            matrix = weight_matrix(self.schema, j, self.snapshot, self.static_table, self.freq, k=k)
            out[:, j] = matrix[clusters, centers[:, j]]
        return out


def sample_center_indices(n: int, k: int, seed: int) -> np.ndarray:
    """k distinct object indices drawn without replacement from a seeded generator."""
    if not 1 <= k <= n:
        raise ConfigError(f"k must be in [1, n={n}], got {k}")
    rng = np.random.default_rng(seed)
    return rng.choice(n, size=k, replace=False)


def init_centers(data: EncodedDataset, k: int, seed: int) -> Centers:
    """Randomly chosen objects as initial centers."""
    return data.rows[sample_center_indices(data.n, k, seed)].copy()


def distance(
    obj: Sequence[int],
    center: Sequence[int],
    cluster: int,
    context: WeightingContext = WeightingContext(),
) -> float:
    """Weighted dissimilarity between one object and the center of `cluster`."""
    total = 0.0
    for j, (x, z) in enumerate(zip(obj, center)):
        if int(x) == int(z):
            total += 1.0 - weight(
                context.schema, j, int(z), cluster, context.snapshot, context.static_table, context.freq
            )
        else:
            total += 1.0
    return total


def distance_matrix(
    data: Union[EncodedDataset, np.ndarray],
    centers: Centers,
    context: WeightingContext = WeightingContext(),
) -> np.ndarray:
    """n x k distances, accumulated attribute by attribute like `distance`."""
    rows = data.rows if isinstance(data, EncodedDataset) else np.asarray(data)
    center_weights = context.center_weights(centers)
    out = np.zeros((rows.shape[0], centers.shape[0]), dtype=np.float64)
    for j in range(rows.shape[1]):
        matches = rows[:, j][:, None] == centers[:, j][None, :]
        out += np.where(matches, 1.0 - center_weights[:, j][None, :], 1.0)
    return out


def assign_all(
    data: Union[EncodedDataset, np.ndarray],
    centers: Centers,
    context: WeightingContext = WeightingContext(),
) -> Membership:
    """Nearest center per object; ties go to the lowest cluster index."""
    return np.argmin(distance_matrix(data, centers, context), axis=1).astype(np.int64)


def update_centers(
    snapshot: ClusterFrequencySnapshot,
    schema: WeightingSchema = WeightingSchema.UNIT,
    static_table: Optional[StaticWeightTable] = None,
    freq: Optional[GlobalFrequencyTable] = None,
) -> Centers:
    """
    Value maximising f(a|C_l) * omega(a, l) per cluster and attribute.

    Ties go to the lowest value id. Under Unit and WF1 this is the plain
    frequency mode.
    """
    empty = snapshot.empty_clusters
    if empty.size:
        raise DegenerateClusterError(int(empty[0]))
    centers = np.empty((snapshot.k, len(snapshot.counts)), dtype=np.int64)
    for j, counts in enumerate(snapshot.counts):
        weights = weight_matrix(schema, j, snapshot, static_table, freq)
        centers[:, j] = np.argmax(counts * weights, axis=1)
    return centers


def objective(
    data: EncodedDataset,
    membership: Membership,
    centers: Centers,
    context: WeightingContext = WeightingContext(),
) -> float:
    """Total weighted distance of every object to its own cluster center."""
    membership = np.asarray(membership)
    own_centers = centers[membership]
    own_weights = context.center_weights(centers)[membership]
    # same accumulation order as distance_matrix
    totals = np.zeros(data.n, dtype=np.float64)
    for j in range(data.m):
        totals += np.where(data.rows[:, j] == own_centers[:, j], 1.0 - own_weights[:, j], 1.0)
    return float(totals.sum())


def run(
    data: EncodedDataset,
    config: RunConfig,
    static_table: Optional[StaticWeightTable] = None,
    freq: Optional[GlobalFrequencyTable] = None,
) -> RunResult:
    """
    Cluster `data` into config.k clusters under config.schema.

    Dynamic schemas (WF1, WF3, WF4) make their first assignment with simple
    matching since no partition exists yet.

    Args:
        data: Encoded dataset
        config: Run parameters
        static_table: Precomputed Goodall weights (built here when needed and omitted)
        freq: Precomputed global frequencies (built here when needed and omitted)

    Returns:
        The converged (or iteration-capped) partition with its objective trace
    """
    started = time.perf_counter()
    schema = config.schema
    k = config.k
    if k > data.n:
        raise ConfigError(f"k={k} exceeds the number of objects n={data.n}")

    if schema.needs_frequencies and freq is None:
        freq = global_frequencies(data)
    if schema.needs_static_table and static_table is None:
        static_table = build_static_weights(freq)
    preprocess_time = time.perf_counter() - started

    centers = _initial_centers(data, config)
    initial = centers.copy()

    if schema.is_dynamic:
        first_context = WeightingContext()
    else:
        first_context = WeightingContext(schema, freq, static_table)
    membership = assign_all(data, centers, first_context)
    membership, centers, repairs = _repair_empty_clusters(data, membership, centers, first_context, k)
    snapshot = ClusterFrequencySnapshot.from_membership(data, membership, k)

    trace = []
    converged = False
    stop_reason = "max_iterations"
    for iteration in range(1, config.max_iterations + 1):
        context = WeightingContext(schema, freq, static_table, snapshot)
        previous_cost = objective(data, membership, centers, context)
        centers = update_centers(snapshot, schema, static_table, freq)
        # one distance evaluation serves both the objective and the reassignment
        distances = distance_matrix(data, centers, context)
        cost = float(distances[np.arange(data.n), membership].sum())
        trace.append(cost)

        # new centers that do not lower the cost of the current partition
        if math.isclose(cost, previous_cost, rel_tol=_OBJECTIVE_TOLERANCE, abs_tol=_OBJECTIVE_TOLERANCE):
            converged, stop_reason = True, "objective"
        else:
            reassigned = np.argmin(distances, axis=1).astype(np.int64)
            if np.array_equal(reassigned, membership):
                converged, stop_reason = True, "fixpoint"
        logger.debug("iteration %d: objective=%.6f previous=%.6f", iteration, cost, previous_cost)
        # the returned pair is always the current partition with its own updated centers
        if converged or iteration == config.max_iterations:
            break

        reassigned, centers, repaired = _repair_empty_clusters(data, reassigned, centers, context, k)
        repairs += repaired
        moves = snapshot.apply_moves(data, membership, reassigned)
        membership = reassigned
        logger.debug("iteration %d: moves=%d", iteration, moves)

    if not converged:
        logger.warning("%s stopped at max_iterations=%d without converging", schema.label, config.max_iterations)

    membership.flags.writeable = False
    centers.flags.writeable = False
    return RunResult(
        membership=membership,
        centers=centers,
        objective_trace=tuple(trace),
        iterations=len(trace),
        converged=converged,
        wall_time=time.perf_counter() - started,
        schema=schema,
        preprocess_time=preprocess_time,
        initial_centers=initial,
        repairs=repairs,
        stop_reason=stop_reason,
    )


def _initial_centers(data: EncodedDataset, config: RunConfig) -> Centers:
    if config.initial_centers is None:
        return init_centers(data, config.k, config.seed)
    centers = np.array(config.initial_centers, dtype=np.int64, copy=True)
    if centers.shape != (config.k, data.m):
        raise ConfigError(f"initial centers have shape {centers.shape}, expected {(config.k, data.m)}")
    limits = np.asarray(data.schema.cardinalities)
    if (centers < 0).any() or (centers >= limits[None, :]).any():
        raise ConfigError("initial centers contain value ids outside the attribute domains")
    return centers


def _repair_empty_clusters(
    data: EncodedDataset,
    membership: Membership,
    centers: Centers,
    context: WeightingContext,
    k: int,
) -> Tuple[Membership, Centers, int]:
    """
    Re-seed every empty cluster with the object farthest from its own center.

    Candidates come from clusters that keep at least one member and differ
    from every current center. The sweep is rerun once; a seed that still
    ends up alone elsewhere is moved into its cluster directly.
    """
    sizes = np.bincount(membership, minlength=k)
    empty = np.flatnonzero(sizes == 0)
    if empty.size == 0:
        return membership, centers, 0

    own = distance_matrix(data, centers, context)[np.arange(data.n), membership]
    centers = centers.copy()
    available = sizes.copy()
    taken = np.zeros(data.n, dtype=bool)
    seeds = {}
    for cluster in empty:
        is_center = (data.rows[:, None, :] == centers[None, :, :]).all(axis=2).any(axis=1)
        candidates = ~taken & ~is_center & (available[membership] > 1)
        if not candidates.any():
            raise RunError(
                f"cannot repair empty cluster {int(cluster)}: k={k} exceeds the number of distinct rows available"
            )
        chosen = int(np.argmax(np.where(candidates, own, -np.inf)))
        centers[cluster] = data.rows[chosen]
        taken[chosen] = True
        available[membership[chosen]] -= 1
        seeds[int(cluster)] = chosen
        logger.warning("cluster %d emptied; re-seeded with object %d", int(cluster), chosen)

    membership = assign_all(data, centers, context)
    for cluster, chosen in seeds.items():
        if not (membership == cluster).any():
            membership[chosen] = cluster
    if (np.bincount(membership, minlength=k) == 0).any():
        raise RunError("empty-cluster repair left a cluster without members")
    return membership, centers, len(seeds)
