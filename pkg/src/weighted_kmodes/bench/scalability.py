"""
Runtime scaling against the number of objects or the number of clusters.

Timing runs execute serially. Object scaling uses prefixes of the dataset.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass
from typing import List, Optional, Sequence, Union

import numpy as np
import pandas as pd
from scipy import stats

from ...utils import get_logger
from ..dataset import EncodedDataset, LabeledDataset
from ..engine import RunConfig, init_centers, run
from ..errors import ConfigError
from ..weights import ALL_SCHEMAS, WeightingSchema
from .experiments import _coerce_schemas, derive_seeds

logger = get_logger(__name__)


@dataclass(frozen=True)
class TimingRow:
    """Mean timing of one schema at one size point."""
    schema: WeightingSchema
    axis: str
    value: int
    n: int
    k: int
    repeats: int
    mean_wall_time: float
    mean_preprocess_time: float
    mean_iterations: float

    @property
    def mean_time_per_iteration(self) -> float:
        return self.mean_wall_time / self.mean_iterations if self.mean_iterations else math.nan


@dataclass(frozen=True)
class LinearFit:
    slope: float
    intercept: float
    r_squared: float


def scalability_experiment(
    dataset: Union[EncodedDataset, LabeledDataset],
    object_counts: Optional[Sequence[int]] = None,
    cluster_counts: Optional[Sequence[int]] = None,
    schemas: Sequence = ALL_SCHEMAS,
    seed: int = 0,
    k: int = 10,
    repeats: int = 1,
    max_iterations: int = 100,
) -> List[TimingRow]:
    """
    Time every schema over a sweep of object counts (k fixed) or cluster counts (n fixed).

    Within a size point and repeat, all schemas start from the same centers.
    """
    data = dataset.data if isinstance(dataset, LabeledDataset) else dataset
    if (object_counts is None) == (cluster_counts is None):
        raise ConfigError("give exactly one of object_counts or cluster_counts")
    if repeats < 1:
        raise ConfigError(f"repeats must be at least 1, got {repeats}")
    schemas = _coerce_schemas(schemas)

    if object_counts is not None:
        axis, points = "objects", [int(v) for v in object_counts]
        if any(not k <= v <= data.n for v in points):
            raise ConfigError(f"object counts must lie in [k={k}, n={data.n}]")
    else:
        axis, points = "clusters", [int(v) for v in cluster_counts]
        if any(not 1 <= v <= data.n for v in points):
            raise ConfigError(f"cluster counts must lie in [1, n={data.n}]")

    seeds = derive_seeds(seed, repeats)
    rows = []
    for value in points:
        subset = data.head(value) if axis == "objects" else data
        clusters = k if axis == "objects" else value
        timings = {schema: [] for schema in schemas}
        for repeat_seed in seeds:
            centers = init_centers(subset, clusters, repeat_seed)
            for schema in schemas:
                config = RunConfig(
                    k=clusters, schema=schema, max_iterations=max_iterations,
                    seed=repeat_seed, initial_centers=centers,
                )
                timings[schema].append(run(subset, config))
        for schema in schemas:
            results = timings[schema]
            rows.append(TimingRow(
                schema=schema,
                axis=axis,
                value=value,
                n=subset.n,
                k=clusters,
                repeats=repeats,
                mean_wall_time=math.fsum(r.wall_time for r in results) / len(results),
                mean_preprocess_time=math.fsum(r.preprocess_time for r in results) / len(results),
                mean_iterations=math.fsum(r.iterations for r in results) / len(results),
            ))
            logger.info(
                "%s %s=%d: %.4fs (%.1f iterations)",
                schema.label, axis, value, rows[-1].mean_wall_time, rows[-1].mean_iterations,
            )
    return rows


def timing_frame(rows: Sequence[TimingRow]) -> pd.DataFrame:
    """Timing rows as a table; timing columns end in `_seconds`."""
    records = []
    for row in rows:
        record = asdict(row)
        record["schema"] = row.schema.value
        record["mean_wall_seconds"] = record.pop("mean_wall_time")
        record["mean_preprocess_seconds"] = record.pop("mean_preprocess_time")
        record["mean_seconds_per_iteration"] = row.mean_time_per_iteration
        records.append(record)
    return pd.DataFrame(records)


def linear_fit(rows: Sequence[TimingRow], schema: WeightingSchema, per_iteration: bool = False) -> LinearFit:
    """Least-squares line of time against the swept size for one schema."""
    selected = [r for r in rows if r.schema is schema]
    if len(selected) < 2:
        raise ConfigError(f"need at least two size points for {schema.label}, got {len(selected)}")
    x = np.array([r.value for r in selected], dtype=np.float64)
    y = np.array(
        [r.mean_time_per_iteration if per_iteration else r.mean_wall_time for r in selected], dtype=np.float64
    )
    fit = stats.linregress(x, y)
    return LinearFit(slope=float(fit.slope), intercept=float(fit.intercept), r_squared=float(fit.rvalue ** 2))
