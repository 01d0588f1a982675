"""Command-line pipeline: validate-ontology, project, cluster, evaluate, run.

Exit codes: 0 ok, 1 usage, 2 data error, 3 ontology error, 4 internal
invariant breach. All artifact files are written deterministically; a rerun
with the same inputs and seed produces byte-identical outputs.
"""

import argparse
import csv
import io
import sys
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import DataError, InvariantError, OntologyError
from . import dataset as ds
from . import ontology as onto
from . import projection
from . import clustering
from . import evaluation

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2
EXIT_ONTOLOGY = 3
EXIT_INTERNAL = 4


@dataclass
class RunConfig:
    data: Path
    ontology: Path
    schema: Path | None = None
    name: str | None = None
    seed: int = 0
    sse_space: str = "original"
    out: Path = Path("ontocluster-out")
    emit_levels: bool = False
    emit_assignments: bool = False
    population: int | None = None
    generations: int | None = None
    k_min: int | None = None
    k_max: int | None = None
    workers: int = 1


class _Parser(argparse.ArgumentParser):
    # argparse exits 2 on usage errors by default; the contract here is 1
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _code_for(exc) -> int:
    if isinstance(exc, OntologyError):
        return EXIT_ONTOLOGY
    if isinstance(exc, InvariantError):
        return EXIT_INTERNAL
    return EXIT_DATA  # DataError, OSError


def _read_text(path: Path) -> str:
    return Path(path).read_text(encoding="utf-8")


def _ga_config(args) -> clustering.GAConfig:
    cfg = clustering.GAConfig(seed=args.seed, workers=getattr(args, "workers", 1))
    if getattr(args, "population", None) is not None:
        cfg.population_size = args.population
    if getattr(args, "generations", None) is not None:
        cfg.generations = args.generations
    if getattr(args, "k_min", None) is not None:
        cfg.k_min = args.k_min
    if getattr(args, "k_max", None) is not None:
        cfg.k_max = args.k_max
    return cfg


def _level_csv(ld: projection.LevelDataset) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(ld.concept_names)
    for row in ld.values:
        writer.writerow([repr(float(v)) for v in row])
    return buf.getvalue()


def _assignments_csv(c: clustering.Clustering) -> str:
    lines = ["record,cluster"]
    lines.extend(f"{i},{cid}" for i, cid in enumerate(c.assignments))
    return "\n".join(lines) + "\n"


def _read_numeric_csv(text: str):
    """A prepared all-numeric CSV (e.g. a level CSV): header + float rows."""
    reader = csv.reader(io.StringIO(text))
    try:
        header = next(reader)
    except StopIteration:
        raise DataError("empty file: no header row") from None
    rows = []
    for raw in reader:
        if not raw:
            continue
        if len(raw) != len(header):
            raise DataError(f"row has {len(raw)} cells, header has {len(header)}")
        try:
            rows.append([float(c) for c in raw])
        except ValueError as exc:
            raise DataError(f"non-numeric cell: {exc}") from exc
    if not rows:
        raise DataError("no data rows")
    return [h.strip() for h in header], np.array(rows, dtype=np.float64)


def _read_assignments_csv(text: str) -> np.ndarray:
    reader = csv.reader(io.StringIO(text))
    header = next(reader, None)
    if header is None or [h.strip() for h in header] != ["record", "cluster"]:
        raise DataError("assignments CSV must start with header 'record,cluster'")
    pairs = []
    for raw in reader:
        if not raw:
            continue
        try:
            pairs.append((int(raw[0]), int(raw[1])))
        except (ValueError, IndexError) as exc:
            raise DataError(f"bad assignments row {raw!r}") from exc
    pairs.sort()
    if [p[0] for p in pairs] != list(range(len(pairs))):
        raise DataError("assignments must cover records 0..n-1 exactly once")
    return np.array([p[1] for p in pairs], dtype=np.int64)


def _load_matrix(args):
    schema = {}
    if getattr(args, "schema", None):
        schema = ds.parse_schema(_read_text(args.schema))
    matrix, report = ds.load_csv(_read_text(args.data), schema)
    for w in report.warnings:
        print(f"warning: {w}", file=sys.stderr)
    print(
        f"ingest: {report.rows_read} rows read, {report.rows_dropped} dropped, "
        f"{len(report.columns_excluded)} columns excluded",
        file=sys.stderr,
    )
    return matrix, report


# --- subcommands ------------------------------------------------------------


def cmd_validate_ontology(args) -> int:
    try:
        text = _read_text(args.ontology)
    except OSError as exc:
        print(f"error [read-ontology]: {exc}", file=sys.stderr)
        return EXIT_DATA
    try:
        o = onto.parse_ontology(text)
    except OntologyError as exc:
        print(f"error [validate-ontology]: {exc}", file=sys.stderr)
        return EXIT_ONTOLOGY
    print(f"levels: {onto.level_census(o)}, depth {o.depth}")
    return EXIT_OK


def cmd_project(args) -> int:
    stage = "load-data"
    try:
        matrix, _ = _load_matrix(args)
        stage = "normalize"
        matrix = ds.normalize(matrix)
        stage = "parse-ontology"
        o = onto.parse_ontology(_read_text(args.ontology))
        stage = "project"
        levels = projection.project_all(matrix, o)
        stage = "write"
        outdir = Path(args.out)
        outdir.mkdir(parents=True, exist_ok=True)
        for ld in levels:
            (outdir / f"level_{ld.level}.csv").write_text(
                _level_csv(ld), encoding="utf-8"
            )
            print(f"level {ld.level}: {ld.n_records} x {len(ld.concept_names)}")
    except (OntologyError, DataError, InvariantError, OSError) as exc:
        print(f"error [{stage}]: {exc}", file=sys.stderr)
        return _code_for(exc)
    return EXIT_OK


def cmd_cluster(args) -> int:
    stage = "load-data"
    try:
        header, values = _read_numeric_csv(_read_text(args.data))
        stage = "cluster"
        cfg = _ga_config(args)
        result, stats = clustering.genetic_cluster_detailed(values, cfg)
        stage = "write"
        outdir = Path(args.out)
        outdir.mkdir(parents=True, exist_ok=True)
        (outdir / "assignments.csv").write_text(
            _assignments_csv(result), encoding="utf-8"
        )
        print(f"k: {result.k}")
        print(f"sse: {evaluation.sse(values, result.assignments)!r}")
        print(f"fitness: {stats.fitness!r}")
    except (OntologyError, DataError, InvariantError, OSError) as exc:
        print(f"error [{stage}]: {exc}", file=sys.stderr)
        return _code_for(exc)
    return EXIT_OK


def _write_report(report, outdir: Path) -> None:
    outdir.mkdir(parents=True, exist_ok=True)
    (outdir / "report.json").write_text(
        evaluation.report_to_json(report), encoding="utf-8"
    )
    for fname, text in evaluation.report_to_csv_tables(report).items():
        (outdir / fname).write_text(text, encoding="utf-8")


def cmd_evaluate(args) -> int:
    stage = "load-levels"
    try:
        if len(args.level_data) != len(args.assignments):
            raise DataError("need one --assignments per --level-data")
        level_sets = []
        for lvl, path in enumerate(args.level_data, start=1):
            header, values = _read_numeric_csv(_read_text(path))
            level_sets.append(
                projection.LevelDataset(
                    level=lvl, concept_names=tuple(header), values=values
                )
            )
        stage = "load-assignments"
        clusterings = []
        for ldset, path in zip(level_sets, args.assignments):
            asg = _read_assignments_csv(_read_text(path))
            if asg.size != ldset.n_records:
                raise DataError(
                    f"{asg.size} assignments for {ldset.n_records} records in level "
                    f"{ldset.level}"
                )
            k = int(asg.max()) + 1
            cents = clustering._means(ldset.values, asg, k)
            clusterings.append(
                clustering.Clustering(assignments=asg, centroids=cents, k=k)
            )
        stage = "evaluate"
        report = evaluation.build_report(
            args.name, clusterings, level_sets, args.sse_space
        )
        stage = "write"
        _write_report(report, Path(args.out))
        print(evaluation.format_summary(report), end="")
    except (OntologyError, DataError, InvariantError, OSError) as exc:
        print(f"error [{stage}]: {exc}", file=sys.stderr)
        return _code_for(exc)
    return EXIT_OK


def run_pipeline(cfg: RunConfig):
    """load -> normalize -> project_all -> genetic_cluster per level ->
    build_report. Returns (report, level_datasets, clusterings)."""
    schema = {}
    if cfg.schema is not None:
        schema = ds.parse_schema(_read_text(cfg.schema))
    matrix, ingest = ds.load_csv(_read_text(cfg.data), schema)
    matrix = ds.normalize(matrix)
    o = onto.parse_ontology(_read_text(cfg.ontology))
    levels = projection.project_all(matrix, o)
    ga = clustering.GAConfig(seed=cfg.seed, workers=cfg.workers)
    if cfg.population is not None:
        ga.population_size = cfg.population
    if cfg.generations is not None:
        ga.generations = cfg.generations
    if cfg.k_min is not None:
        ga.k_min = cfg.k_min
    if cfg.k_max is not None:
        ga.k_max = cfg.k_max
    clusterings = [clustering.genetic_cluster(ld, ga) for ld in levels]
    name = cfg.name if cfg.name is not None else Path(cfg.data).stem
    report = evaluation.build_report(name, clusterings, levels, cfg.sse_space)
    return report, levels, clusterings, ingest


def cmd_run(args) -> int:
    cfg = RunConfig(
        data=Path(args.data),
        ontology=Path(args.ontology),
        schema=Path(args.schema) if args.schema else None,
        name=args.name,
        seed=args.seed,
        sse_space=args.sse_space,
        out=Path(args.out),
        emit_levels=args.emit_levels,
        emit_assignments=args.emit_assignments,
        population=args.population,
        generations=args.generations,
        k_min=args.k_min,
        k_max=args.k_max,
        workers=args.workers,
    )
    stage = "pipeline"
    try:
        for path in (cfg.data, cfg.ontology) + ((cfg.schema,) if cfg.schema else ()):
            if not Path(path).exists():
                raise DataError(f"no such file: {path}")
        report, levels, clusterings, ingest = run_pipeline(cfg)
        for w in ingest.warnings:
            print(f"warning: {w}", file=sys.stderr)
        stage = "write"
        _write_report(report, cfg.out)
        if cfg.emit_levels:
            for ld in levels:
                (cfg.out / f"level_{ld.level}.csv").write_text(
                    _level_csv(ld), encoding="utf-8"
                )
        if cfg.emit_assignments:
            for ld, c in zip(levels, clusterings):
                (cfg.out / f"assignments_level_{ld.level}.csv").write_text(
                    _assignments_csv(c), encoding="utf-8"
                )
        print(evaluation.format_summary(report), end="")
    except (OntologyError, DataError, InvariantError, OSError) as exc:
        print(f"error [{stage}]: {exc}", file=sys.stderr)
        return _code_for(exc)
    return EXIT_OK


# --- argument wiring --------------------------------------------------------


def _add_ga_flags(p):
    p.add_argument("--seed", type=int, default=0, help="RNG seed (default 0)")
    p.add_argument("--population", type=int, default=None, help="GA population size")
    p.add_argument("--generations", type=int, default=None, help="GA generations")
    p.add_argument("--k-min", type=int, default=None, help="minimum cluster count")
    p.add_argument("--k-max", type=int, default=None, help="maximum cluster count")
    p.add_argument(
        "--workers", type=int, default=1,
        help="threads for per-individual refinement (results are identical "
        "for any value)",
    )


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(
        prog="ontocluster",
        description="Cluster a numerical dataset at every level of a domain "
        "ontology and report SSE improvements.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate-ontology", help="check an ontology file")
    p.add_argument("ontology", help="ontology file path")
    p.set_defaults(func=cmd_validate_ontology)

    p = sub.add_parser("project", help="write the per-level datasets as CSV")
    p.add_argument("--data", required=True, help="CSV dataset")
    p.add_argument("--schema", default=None, help="column-role schema file")
    p.add_argument("--ontology", required=True, help="ontology file")
    p.add_argument("--out", default="ontocluster-out", help="output directory")
    p.set_defaults(func=cmd_project)

    p = sub.add_parser("cluster", help="cluster one prepared (projected) CSV")
    p.add_argument("--data", required=True, help="numeric CSV, e.g. a level CSV")
    p.add_argument("--out", default="ontocluster-out", help="output directory")
    _add_ga_flags(p)
    p.set_defaults(func=cmd_cluster)

    p = sub.add_parser("evaluate", help="score stored clusterings per level")
    p.add_argument("--name", default="dataset", help="dataset name for the report")
    p.add_argument(
        "--level-data", action="append", required=True,
        help="level CSV, lowest level first (repeatable)",
    )
    p.add_argument(
        "--assignments", action="append", required=True,
        help="assignments CSV matching each --level-data (repeatable)",
    )
    p.add_argument(
        "--sse-space", choices=("original", "level"), default="original",
        help="space in which improvements are computed",
    )
    p.add_argument("--out", default="ontocluster-out", help="output directory")
    p.set_defaults(func=cmd_evaluate)

    p = sub.add_parser("run", help="full pipeline: load, project, cluster, report")
    p.add_argument("--data", required=True, help="CSV dataset")
    p.add_argument("--ontology", required=True, help="ontology file")
    p.add_argument("--schema", default=None, help="column-role schema file")
    p.add_argument("--name", default=None, help="dataset name (default: file stem)")
    p.add_argument(
        "--sse-space", choices=("original", "level"), default="original",
        help="space in which improvements are computed",
    )
    p.add_argument("--out", default="ontocluster-out", help="output directory")
    p.add_argument("--emit-levels", action="store_true", help="write level CSVs")
    p.add_argument(
        "--emit-assignments", action="store_true", help="write assignment CSVs"
    )
    _add_ga_flags(p)
    p.set_defaults(func=cmd_run)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
