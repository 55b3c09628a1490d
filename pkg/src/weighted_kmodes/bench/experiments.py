"""
Paired multi-run accuracy experiments.

Every run index draws one set of initial centers and hands the same centers
to every weighting schema, so per-run accuracy differences between schemas
are paired observations.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
import pandas as pd

from ...utils import get_logger
from ..dataset import LabeledDataset
from ..engine import RunConfig, run, sample_center_indices
from ..errors import ConfigError, WeightedKModesError
from ..evaluation import clustering_accuracy
from ..weights import ALL_SCHEMAS, WeightingSchema

logger = get_logger(__name__)


def derive_seeds(base_seed: int, run_count: int) -> List[int]:
    """One independent 64-bit seed per run, split from a single SeedSequence."""
    children = np.random.SeedSequence(base_seed).spawn(run_count)
    return [int(child.generate_state(1, dtype=np.uint64)[0]) for child in children]


def _coerce_schemas(schemas: Sequence) -> Tuple[WeightingSchema, ...]:
    coerced = tuple(s if isinstance(s, WeightingSchema) else WeightingSchema.from_name(s) for s in schemas)
    if not coerced:
        raise ConfigError("at least one weighting schema is required")
    if len(set(coerced)) != len(coerced):
        raise ConfigError("weighting schemas must be distinct")
    return coerced


@dataclass(frozen=True, eq=False)
class ExperimentSpec:
    """A paired comparison of weighting schemas on one labelled dataset."""
    dataset: LabeledDataset
    name: str = "dataset"
    schemas: Tuple[WeightingSchema, ...] = ALL_SCHEMAS
    run_count: int = 100
    base_seed: int = 0
    k: Optional[int] = None
    max_iterations: int = 100
    workers: int = 1

    def __post_init__(self) -> None:
        if not self.dataset.has_labels:
            raise ConfigError(f"{self.name}: paired experiments need class labels")
        object.__setattr__(self, "schemas", _coerce_schemas(self.schemas))
        if self.run_count < 1:
            raise ConfigError(f"run_count must be at least 1, got {self.run_count}")
        if self.workers < 1:
            raise ConfigError(f"workers must be at least 1, got {self.workers}")
        if self.k is None:
            object.__setattr__(self, "k", self.dataset.class_count)
        if not 1 <= self.k <= self.dataset.data.n:
            raise ConfigError(f"k must be in [1, {self.dataset.data.n}], got {self.k}")


@dataclass(frozen=True)
class RunRecord:
    """One schema's outcome for one run index."""
    run_index: int
    schema: WeightingSchema
    seed: int
    center_indices: Tuple[int, ...]
    accuracy: float = math.nan
    iterations: int = 0
    converged: bool = False
    wall_time: float = math.nan
    preprocess_time: float = math.nan
    error: Optional[str] = None

    @property
    def ok(self) -> bool:
        return self.error is None


@dataclass(frozen=True)
class SchemaSummary:
    schema: WeightingSchema
    accuracies: Tuple[float, ...]
    mean_accuracy: float
    std_accuracy: float
    mean_iterations: float
    mean_wall_time: float
    mean_preprocess_time: float
    failures: int


@dataclass(frozen=True, eq=False)
class ExperimentReport:
    name: str
    k: int
    run_count: int
    schemas: Tuple[WeightingSchema, ...]
    records: Tuple[RunRecord, ...]
    summaries: Dict[WeightingSchema, SchemaSummary] = field(default_factory=dict)

    @property
    def failures(self) -> int:
        return sum(1 for r in self.records if not r.ok)

    def records_for(self, schema: WeightingSchema) -> List[RunRecord]:
        return [r for r in self.records if r.schema is schema]

    def paired_deltas(self, baseline: WeightingSchema, other: WeightingSchema) -> np.ndarray:
        """Per-run accuracy of `other` minus `baseline`, over runs where both succeeded."""
        base = {r.run_index: r.accuracy for r in self.records_for(baseline) if r.ok}
        deltas = [r.accuracy - base[r.run_index] for r in self.records_for(other) if r.ok and r.run_index in base]
        return np.asarray(deltas, dtype=np.float64)

    def mean_delta(self, baseline: WeightingSchema, other: WeightingSchema) -> float:
        deltas = self.paired_deltas(baseline, other)
        return math.fsum(deltas) / deltas.size if deltas.size else math.nan

    def summary_frame(self) -> pd.DataFrame:
        baseline = self.schemas[0]
        rows = []
        for schema in self.schemas:
            s = self.summaries[schema]
            rows.append({
                "dataset": self.name,
                "schema": schema.value,
                "algorithm": schema.label,
                "mean_accuracy": s.mean_accuracy,
                "std_accuracy": s.std_accuracy,
                "mean_delta_vs_" + baseline.value: self.mean_delta(baseline, schema),
                "mean_iterations": s.mean_iterations,
                "failures": s.failures,
                "mean_wall_seconds": s.mean_wall_time,
                "mean_preprocess_seconds": s.mean_preprocess_time,
            })
        return pd.DataFrame(rows)

    def runs_frame(self) -> pd.DataFrame:
        return pd.DataFrame([
            {
                "dataset": self.name,
                "run": r.run_index,
                "schema": r.schema.value,
                "seed": r.seed,
                "center_indices": " ".join(str(i) for i in r.center_indices),
                "accuracy": r.accuracy,
                "iterations": r.iterations,
                "converged": r.converged,
                "error": r.error or "",
                "wall_seconds": r.wall_time,
                "preprocess_seconds": r.preprocess_time,
            }
            for r in self.records
        ])


def paired_experiment(spec: ExperimentSpec) -> ExperimentReport:
    """Run every schema from identical initial centers for spec.run_count runs."""
    seeds = derive_seeds(spec.base_seed, spec.run_count)
    logger.info(
        "%s: %d paired runs, k=%d, schemas=%s",
        spec.name, spec.run_count, spec.k, ", ".join(s.value for s in spec.schemas),
    )

    def one_run(run_index: int) -> List[RunRecord]:
        return _paired_run(spec, run_index, seeds[run_index])

    if spec.workers > 1:
        with ThreadPoolExecutor(max_workers=spec.workers) as pool:
            per_run = list(pool.map(one_run, range(spec.run_count)))
    else:
        per_run = [one_run(i) for i in range(spec.run_count)]

    records = tuple(record for batch in per_run for record in batch)
    summaries = {schema: _summarize(schema, records) for schema in spec.schemas}
    report = ExperimentReport(
        name=spec.name,
        k=spec.k,
        run_count=spec.run_count,
        schemas=spec.schemas,
        records=records,
        summaries=summaries,
    )
    if report.failures:
        logger.warning("%s: %d of %d runs failed", spec.name, report.failures, len(records))
    return report


def _paired_run(spec: ExperimentSpec, run_index: int, seed: int) -> List[RunRecord]:
    data = spec.dataset.data
    indices = sample_center_indices(data.n, spec.k, seed)
    centers = data.rows[indices]
    center_indices = tuple(int(i) for i in indices)
    records = []
    for schema in spec.schemas:
        config = RunConfig(
            k=spec.k, schema=schema, max_iterations=spec.max_iterations, seed=seed, initial_centers=centers
        )
        try:
            result = run(data, config)
        except WeightedKModesError as exc:
            logger.warning("%s run %d (%s) failed: %s", spec.name, run_index, schema.value, exc)
            records.append(RunRecord(run_index, schema, seed, center_indices, error=str(exc)))
            continue
        report = clustering_accuracy(result.membership, spec.dataset.labels, spec.k, spec.dataset.class_count)
        records.append(RunRecord(
            run_index=run_index,
            schema=schema,
            seed=seed,
            center_indices=center_indices,
            accuracy=report.accuracy,
            iterations=result.iterations,
            converged=result.converged,
            wall_time=result.wall_time,
            preprocess_time=result.preprocess_time,
        ))
    return records


def _mean(values: Sequence[float]) -> float:
    return math.fsum(values) / len(values) if values else math.nan


def _summarize(schema: WeightingSchema, records: Sequence[RunRecord]) -> SchemaSummary:
    ok = [r for r in records if r.schema is schema and r.ok]
    failed = sum(1 for r in records if r.schema is schema and not r.ok)
    accuracies = tuple(r.accuracy for r in ok)
    std = float(np.std(accuracies, ddof=1)) if len(accuracies) > 1 else math.nan
    return SchemaSummary(
        schema=schema,
        accuracies=accuracies,
        mean_accuracy=_mean(accuracies),
        std_accuracy=std,
        mean_iterations=_mean([float(r.iterations) for r in ok]),
        mean_wall_time=_mean([r.wall_time for r in ok]),
        mean_preprocess_time=_mean([r.preprocess_time for r in ok]),
        failures=failed,
    )
