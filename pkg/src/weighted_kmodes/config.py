"""
Packaged experiment configuration (config/experiment_config.yaml).

Holds the table layout of the UCI datasets used in the accuracy experiments
and the defaults of the paired and scalability workflows.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, Optional, Tuple, Union

import yaml

from .dataset import TableFormat
from .errors import ConfigError
from .weights import WeightingSchema

PROJECT_ROOT = Path(__file__).resolve().parents[2]
DEFAULT_CONFIG_PATH = PROJECT_ROOT / "config" / "experiment_config.yaml"


@dataclass(frozen=True)
class DatasetPreset:
    """File name and table layout of a known dataset."""
    name: str
    file: str
    format: TableFormat


@dataclass(frozen=True)
class ExperimentDefaults:
    runs: int = 100
    base_seed: int = 7
    max_iterations: int = 100
    schemas: Tuple[WeightingSchema, ...] = tuple(WeightingSchema)


@dataclass(frozen=True)
class ScalabilityDefaults:
    synthetic_objects: int = 12960
    cardinalities: Tuple[int, ...] = (3, 5, 4, 4, 3, 2, 3, 3)
    class_count: int = 5
    noise: float = 0.3
    clusters: int = 10
    object_counts: Tuple[int, ...] = (2000, 4000, 6000, 8000, 10000, 12960)
    cluster_counts: Tuple[int, ...] = (2, 4, 6, 8, 10)
    repeats: int = 3


@dataclass(frozen=True)
class ProjectConfig:
    data_dir: Path
    experiments: ExperimentDefaults = field(default_factory=ExperimentDefaults)
    scalability: ScalabilityDefaults = field(default_factory=ScalabilityDefaults)
    datasets: Dict[str, DatasetPreset] = field(default_factory=dict)

    def preset(self, name: str) -> DatasetPreset:
        key = name.strip().lower().replace("-", "_").replace(" ", "_")
        try:
            return self.datasets[key]
        except KeyError:
            known = ", ".join(sorted(self.datasets))
            raise ConfigError(f"unknown dataset preset {name!r} (known: {known})") from None

    def data_path(self, name: str) -> Path:
        return self.data_dir / self.preset(name).file


def load_config(path: Optional[Union[str, Path]] = None) -> ProjectConfig:
    """Read the YAML configuration; missing sections fall back to defaults."""
    path = Path(path) if path is not None else DEFAULT_CONFIG_PATH
    try:
        with path.open("r", encoding="utf-8") as handle:
            raw = yaml.safe_load(handle) or {}
    except yaml.YAMLError as exc:
        raise ConfigError(f"{path}: invalid YAML ({exc})") from exc
    if not isinstance(raw, dict):
        raise ConfigError(f"{path}: expected a mapping at the top level")

    data_dir = Path(raw.get("data_dir", "data"))
    if not data_dir.is_absolute():
        data_dir = path.resolve().parent.parent / data_dir

    experiments = dict(raw.get("experiments") or {})
    if "schemas" in experiments:
        experiments["schemas"] = tuple(WeightingSchema.from_name(s) for s in experiments["schemas"])
    scalability = dict(raw.get("scalability") or {})
    for key in ("cardinalities", "object_counts", "cluster_counts"):
        if key in scalability:
            scalability[key] = tuple(int(v) for v in scalability[key])

    datasets = {}
    for name, entry in (raw.get("datasets") or {}).items():
        entry = dict(entry or {})
        if "file" not in entry:
            raise ConfigError(f"{path}: dataset preset {name!r} has no file")
        file_name = entry.pop("file")
        try:
            fmt = TableFormat(**entry)
        except TypeError as exc:
            raise ConfigError(f"{path}: dataset preset {name!r}: {exc}") from exc
        datasets[name] = DatasetPreset(name=name, file=file_name, format=fmt)

    try:
        return ProjectConfig(
            data_dir=data_dir,
            experiments=ExperimentDefaults(**experiments),
            scalability=ScalabilityDefaults(**scalability),
            datasets=datasets,
        )
    except TypeError as exc:
        raise ConfigError(f"{path}: {exc}") from exc
