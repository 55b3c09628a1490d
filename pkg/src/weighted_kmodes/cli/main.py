"""
Command-line entry point.

    python -m src.weighted_kmodes.cli cluster  --data soybean.data --class-col last --k 4 --output out/
    python -m src.weighted_kmodes.cli accuracy --data soybean.data --class-col last --membership out/membership.txt
    python -m src.weighted_kmodes.cli table2   --data soybean.csv --class-col last --k 4 --runs 100 --seed 7 --output table2.csv
    python -m src.weighted_kmodes.cli scale    --synthetic 12960 --k 10 --object-counts 2000,4000 --output scale.csv
"""

from __future__ import annotations

import argparse
from dataclasses import replace
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
import pandas as pd
import yaml
from rich.console import Console
from rich.table import Table
from rich.text import Text

from ...utils import configure_logging, get_logger
from ..bench import ExperimentSpec, linear_fit, paired_experiment, scalability_experiment, timing_frame
from ..config import load_config
from ..dataset import LabeledDataset, TableFormat, load_table_path, planted_dataset
from ..engine import RunConfig, run
from ..errors import ConfigError, InputError, WeightedKModesError
from ..evaluation import clustering_accuracy, matched_accuracy
from ..weights import ALL_SCHEMAS, WeightingSchema

logger = get_logger(__name__)

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_USAGE = 2


def _class_column(text: str) -> Optional[int]:
    key = text.strip().lower()
    if key == "none":
        return None
    if key == "last":
        return -1
    try:
        return int(key)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, 'last' or 'none', got {text!r}") from None


def _int_list(text: str) -> Tuple[int, ...]:
    try:
        return tuple(int(v) for v in text.split(",") if v.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def _schema(text: str) -> WeightingSchema:
    try:
        return WeightingSchema.from_name(text)
    except ConfigError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def build_parser() -> argparse.ArgumentParser:
    data_options = argparse.ArgumentParser(add_help=False)
    data_options.add_argument("--data", action="append", default=[], help="data file (repeatable for table2)")
    data_options.add_argument("--preset", help="packaged dataset preset (e.g. soybean, voting)")
    data_options.add_argument("--delimiter", help="field delimiter (default ',')")
    data_options.add_argument("--class-col", type=_class_column, default=argparse.SUPPRESS,
                              help="class column index, 'last' or 'none'")
    data_options.add_argument("--drop-cols", type=_int_list, help="comma-separated columns to ignore")
    data_options.add_argument("--missing", help="missing-value marker (default '?')")
    data_options.add_argument("--missing-policy", choices=("category", "drop"))
    data_options.add_argument("-v", "--verbose", action="count", default=0)

    parser = argparse.ArgumentParser(
        prog="weighted-kmodes",
        description="k-modes clustering with attribute value weighting",
    )
    commands = parser.add_subparsers(dest="command", required=True)

    cluster = commands.add_parser("cluster", parents=[data_options], help="run one seeded clustering")
    cluster.add_argument("--schema", type=_schema, default=WeightingSchema.UNIT,
                         help="kmodes, df, sf, hcf or hsf")
    cluster.add_argument("--k", type=int, help="number of clusters (default: number of classes)")
    cluster.add_argument("--seed", type=int, default=0)
    cluster.add_argument("--max-iterations", type=int, default=100)
    cluster.add_argument("--output", required=True, help="output directory")
    cluster.set_defaults(handler=_cmd_cluster)

    accuracy = commands.add_parser("accuracy", parents=[data_options], help="score a membership file")
    accuracy.add_argument("--membership", required=True, help="one cluster index per line")
    accuracy.add_argument("--k", type=int, help="number of clusters (default: largest index + 1)")
    accuracy.add_argument("--output", help="optional summary YAML path")
    accuracy.set_defaults(handler=_cmd_accuracy)

    table2 = commands.add_parser(
        "table2", aliases=["compare"], parents=[data_options], help="paired multi-run accuracy table"
    )
    table2.add_argument("--schema", type=_schema, action="append", help="repeatable (default: all five)")
    table2.add_argument("--k", type=int, help="number of clusters (default: number of classes)")
    table2.add_argument("--runs", type=int)
    table2.add_argument("--seed", type=int)
    table2.add_argument("--max-iterations", type=int)
    table2.add_argument("--workers", type=int, default=1)
    table2.add_argument("--output", required=True, help="CSV path for the mean accuracy table")
    table2.set_defaults(handler=_cmd_table2)

    scale = commands.add_parser("scale", parents=[data_options], help="runtime against n or k")
    scale.add_argument("--synthetic", type=int, help="generate this many Nursery-like objects instead of --data")
    scale.add_argument("--schema", type=_schema, action="append", help="repeatable (default: all five)")
    scale.add_argument("--k", type=int, help="clusters for object scaling")
    sweep = scale.add_mutually_exclusive_group(required=True)
    sweep.add_argument("--object-counts", type=_int_list)
    sweep.add_argument("--cluster-counts", type=_int_list)
    scale.add_argument("--repeats", type=int)
    scale.add_argument("--seed", type=int, default=0)
    scale.add_argument("--max-iterations", type=int, default=100)
    scale.add_argument("--output", required=True, help="CSV path for the timing rows")
    scale.set_defaults(handler=_cmd_scale)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code in (0, None) else EXIT_USAGE

    configure_logging(args.verbose)
    try:
        return args.handler(args)
    except (WeightedKModesError, OSError) as exc:
        Console(stderr=True).print(Text(f"error: {exc}", style="bold red"), soft_wrap=True)
        return EXIT_FAILURE


# --- dataset resolution ---

def _datasets(args: argparse.Namespace, single: bool = True) -> List[Tuple[str, LabeledDataset]]:
    config = load_config()
    fmt = TableFormat()
    paths = [Path(p) for p in args.data]
    if args.preset:
        preset = config.preset(args.preset)
        fmt = preset.format
        if not paths:
            paths = [config.data_dir / preset.file]
    overrides = {}
    if args.delimiter is not None:
        overrides["delimiter"] = args.delimiter
    if hasattr(args, "class_col"):
        overrides["class_column"] = args.class_col
    if args.drop_cols is not None:
        overrides["drop_columns"] = args.drop_cols
    if args.missing is not None:
        overrides["missing_marker"] = args.missing
    if args.missing_policy is not None:
        overrides["missing_policy"] = args.missing_policy
    fmt = replace(fmt, **overrides)

    if not paths:
        raise ConfigError("no dataset given: use --data or --preset")
    if single and len(paths) > 1:
        raise ConfigError(f"{args.command} takes a single --data file")
    return [(args.preset if args.preset and len(paths) == 1 else p.stem, load_table_path(p, fmt)) for p in paths]


def _write_yaml(path: Path, document: Dict) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", encoding="utf-8") as handle:
        yaml.safe_dump(document, handle, sort_keys=True)


# --- subcommands ---

def _cmd_cluster(args: argparse.Namespace) -> int:
    (name, dataset), = _datasets(args)
    k = args.k if args.k is not None else dataset.class_count
    if not k:
        raise ConfigError("--k is required when the dataset has no class column")
    config = RunConfig(k=k, schema=args.schema, max_iterations=args.max_iterations, seed=args.seed)
    result = run(dataset.data, config)

    out = Path(args.output)
    out.mkdir(parents=True, exist_ok=True)
    (out / "membership.txt").write_text("".join(f"{int(c)}\n" for c in result.membership), encoding="utf-8")
    centers = pd.DataFrame(
        [dataset.data.decode_row(row) for row in result.centers],
        columns=list(dataset.data.schema.names),
    )
    centers.index.name = "cluster"
    centers.to_csv(out / "centers.csv")
    pd.DataFrame({
        "iteration": np.arange(1, result.iterations + 1),
        "objective": list(result.objective_trace),
    }).to_csv(out / "trace.csv", index=False)

    summary = {
        "command": "cluster",
        "dataset": name,
        "schema": result.schema.value,
        "k": k,
        "seed": args.seed,
        "iterations": result.iterations,
        "converged": result.converged,
        "stop_reason": result.stop_reason,
        "objective": result.objective,
        "repairs": result.repairs,
        "wall_seconds": result.wall_time,
        "preprocess_seconds": result.preprocess_time,
    }
    if dataset.has_labels:
        summary["accuracy"] = clustering_accuracy(
            result.membership, dataset.labels, k, dataset.class_count
        ).accuracy
    _write_yaml(out / "summary.yaml", summary)

    console = Console()
    console.print(
        f"[bold green]{result.schema.label}[/bold green] on {name}: k={k}, "
        f"{result.iterations} iterations, objective {result.objective:.4f}"
        + (f", accuracy {summary['accuracy']:.4f}" if "accuracy" in summary else "")
    )
    return EXIT_OK


def _cmd_accuracy(args: argparse.Namespace) -> int:
    (name, dataset), = _datasets(args)
    if not dataset.has_labels:
        raise ConfigError("accuracy needs a class column (--class-col)")
    try:
        membership = np.loadtxt(args.membership, dtype=np.int64, ndmin=1)
    except ValueError as exc:
        raise InputError(f"{args.membership}: {exc}") from exc
    if membership.size == 0:
        raise InputError(f"{args.membership}: empty membership file")
    k = args.k if args.k is not None else int(membership.max()) + 1
    report = clustering_accuracy(membership, dataset.labels, k, dataset.class_count)
    matched = matched_accuracy(membership, dataset.labels, k, dataset.class_count)

    table = Table(title=f"Accuracy on {name}")
    table.add_column("cluster", justify="right")
    table.add_column("dominant class")
    table.add_column("s_l", justify="right")
    for cluster, (cls, count) in enumerate(zip(report.dominant_classes, report.dominant_counts)):
        table.add_row(str(cluster), dataset.class_names[cls] if count else "-", str(count))
    console = Console()
    console.print(table)
    console.print(f"accuracy r = [bold]{report.accuracy:.4f}[/bold] (one-to-one matched: {matched:.4f})")

    if args.output:
        document = report.to_dict()
        document.update({"command": "accuracy", "dataset": name, "k": k, "matched_accuracy": matched})
        _write_yaml(Path(args.output), document)
    return EXIT_OK


def _cmd_table2(args: argparse.Namespace) -> int:
    defaults = load_config().experiments
    schemas = tuple(args.schema) if args.schema else defaults.schemas
    reports = []
    for name, dataset in _datasets(args, single=False):
        spec = ExperimentSpec(
            dataset=dataset,
            name=name,
            schemas=schemas,
            run_count=args.runs if args.runs is not None else defaults.runs,
            base_seed=args.seed if args.seed is not None else defaults.base_seed,
            k=args.k,
            max_iterations=args.max_iterations if args.max_iterations is not None else defaults.max_iterations,
            workers=args.workers,
        )
        reports.append((spec, paired_experiment(spec)))

    table_rows = []
    summary = {"command": "table2", "datasets": {}}
    frames = []
    for spec, report in reports:
        frame = report.summary_frame()
        frames.append(frame)
        row = {"dataset": spec.name}
        row.update(zip(frame["schema"], 100.0 * frame["mean_accuracy"]))
        table_rows.append(row)
        summary["datasets"][spec.name] = {
            "k": spec.k,
            "runs": spec.run_count,
            "base_seed": spec.base_seed,
            "failures": report.failures,
            "schemas": frame.drop(columns=["dataset"]).set_index("schema").to_dict(orient="index"),
        }

    output = Path(args.output)
    output.parent.mkdir(parents=True, exist_ok=True)
    pd.DataFrame(table_rows).to_csv(output, index=False)
    pd.concat(frames).to_csv(output.with_suffix(".schemas.csv"), index=False)
    pd.concat([report.runs_frame() for _, report in reports]).to_csv(
        output.with_suffix(".runs.csv"), index=False
    )
    _write_yaml(output.with_suffix(".summary.yaml"), summary)

    table = Table(title="Average clustering accuracy (%)")
    table.add_column("dataset")
    for schema in schemas:
        table.add_column(schema.label, justify="right")
    for row in table_rows:
        table.add_row(row["dataset"], *(f"{row[s.value]:.2f}" for s in schemas))
    Console().print(table)
    return EXIT_OK if all(r.failures == 0 for _, r in reports) else EXIT_FAILURE


def _cmd_scale(args: argparse.Namespace) -> int:
    defaults = load_config().scalability
    if args.synthetic is not None:
        dataset = planted_dataset(
            n=args.synthetic,
            cardinalities=defaults.cardinalities,
            class_count=defaults.class_count,
            noise=defaults.noise,
            seed=args.seed,
        )
    else:
        (_, dataset), = _datasets(args)
    schemas = tuple(args.schema) if args.schema else ALL_SCHEMAS
    rows = scalability_experiment(
        dataset,
        object_counts=args.object_counts,
        cluster_counts=args.cluster_counts,
        schemas=schemas,
        seed=args.seed,
        k=args.k if args.k is not None else defaults.clusters,
        repeats=args.repeats if args.repeats is not None else defaults.repeats,
        max_iterations=args.max_iterations,
    )
    output = Path(args.output)
    output.parent.mkdir(parents=True, exist_ok=True)
    timing_frame(rows).to_csv(output, index=False)

    table = Table(title=f"Scalability against {rows[0].axis}")
    table.add_column("algorithm")
    table.add_column("slope (s/unit)", justify="right")
    table.add_column("R²", justify="right")
    points = len({r.value for r in rows})
    for schema in schemas:
        if points >= 2:
            fit = linear_fit(rows, schema)
            table.add_row(schema.label, f"{fit.slope:.3e}", f"{fit.r_squared:.3f}")
    Console().print(table)
    return EXIT_OK
