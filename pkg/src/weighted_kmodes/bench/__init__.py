"""
Benchmark module: paired accuracy experiments and scalability timing.
"""

from .experiments import (
    ExperimentReport,
    ExperimentSpec,
    RunRecord,
    SchemaSummary,
    derive_seeds,
    paired_experiment,
)
from .scalability import LinearFit, TimingRow, linear_fit, scalability_experiment, timing_frame

__all__ = [
    "ExperimentReport",
    "ExperimentSpec",
    "RunRecord",
    "SchemaSummary",
    "derive_seeds",
    "paired_experiment",
    "LinearFit",
    "TimingRow",
    "linear_fit",
    "scalability_experiment",
    "timing_frame",
]
