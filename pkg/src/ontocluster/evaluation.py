"""SSE per level and level-to-level improvement percentages.

Assignments produced at a higher level are scored over the same records in
two spaces: the level's own attribute space and the level-1 (original
normalized) space. By default improvements are computed in the original
space, so every level is judged by one common metric; the per-level space
is reported alongside and can drive the percentages instead.

Percentages are carried unrounded and only rounded to two decimals when a
table is rendered.
"""

import json
import math
from dataclasses import dataclass

import numpy as np

from .errors import DataError


@dataclass(frozen=True)
class LevelResult:
    level: int
    k: int
    sse_original_space: float
    sse_level_space: float

    def __post_init__(self):
        if self.sse_original_space < 0 or self.sse_level_space < 0:
            raise DataError("SSE cannot be negative")


@dataclass(frozen=True)
class EvaluationReport:
    dataset: str
    space: str  # which space drove the improvements: original | level
    levels: tuple  # LevelResult, ascending level
    step_improvements: tuple  # percents, length len(levels) - 1
    total_improvement: float

    def __post_init__(self):
        if self.space not in ("original", "level"):
            raise DataError(f"unknown space {self.space!r}")
        if len(self.step_improvements) != max(len(self.levels) - 1, 0):
            raise DataError("one step improvement per consecutive level pair")
        if math.fsum(self.step_improvements) != self.total_improvement:
            raise DataError("total_improvement must be the exact sum of steps")


def _as_points(points) -> np.ndarray:
    x = np.asarray(getattr(points, "values", points), dtype=np.float64)
    if x.ndim != 2:
        raise DataError(f"expected an n x d matrix, got shape {x.shape}")
    return x


def sse(points, assignments) -> float:
    """Sum over clusters of squared Euclidean distances to the member mean."""
    x = _as_points(points)
    asg = np.asarray(assignments, dtype=np.int64)
    if asg.ndim != 1 or asg.size != x.shape[0]:
        raise DataError(
            f"{asg.size} assignments for {x.shape[0]} records"
        )
    if asg.min() < 0:
        raise DataError("negative cluster id")
    k = int(asg.max()) + 1
    counts = np.bincount(asg, minlength=k)
    if np.any(counts == 0):
        raise DataError("every cluster id in 0..k-1 must be non-empty")
    sums = np.empty((k, x.shape[1]), dtype=np.float64)
    for j in range(x.shape[1]):
        sums[:, j] = np.bincount(asg, weights=x[:, j], minlength=k)
    mu = sums / counts[:, None]
    diffs = x - mu[asg]
    return float(np.sum(diffs * diffs))


def evaluate_level(original, projected, clustering, space: str = "original") -> LevelResult:
    """Score one level's clustering in both spaces. ``original`` is the
    level-1 dataset; ``projected`` the dataset the clustering was built on."""
    if space not in ("original", "level"):
        raise DataError(f"unknown space {space!r}")
    orig = _as_points(original)
    proj = _as_points(projected)
    if orig.shape[0] != proj.shape[0]:
        raise DataError(
            f"record counts disagree: {orig.shape[0]} vs {proj.shape[0]}"
        )
    level = getattr(projected, "level", 0)
    return LevelResult(
        level=level,
        k=clustering.k,
        sse_original_space=sse(orig, clustering.assignments),
        sse_level_space=sse(proj, clustering.assignments),
    )


def step_improvement(sse_prev: float, sse_next: float) -> float:
    """Percent change from one level to the next; positive = improvement."""
    if not sse_prev > 0:
        raise DataError(f"previous SSE must be positive, got {sse_prev}")
    return 100.0 * (sse_prev - sse_next) / sse_prev


def total_improvement(steps) -> float:
    """Exact (compensated) sum of the unrounded step percentages."""
    steps = list(steps)
    if not steps:
        raise DataError("no step improvements to total")
    return math.fsum(steps)


def build_report(name, clusterings, level_datasets, space: str = "original") -> EvaluationReport:
    """Assemble the full per-level report for one dataset."""
    if len(clusterings) != len(level_datasets) or not clusterings:
        raise DataError("need one clustering per level dataset, at least one")
    if level_datasets[0].level != 1:
        raise DataError("the first level dataset must be level 1")
    levels = [ld.level for ld in level_datasets]
    if levels != sorted(levels) or len(set(levels)) != len(levels):
        raise DataError("level datasets must be in strictly ascending order")
    original = level_datasets[0]
    results = tuple(
        evaluate_level(original, ld, c, space)
        for ld, c in zip(level_datasets, clusterings)
    )
    series = [
        r.sse_original_space if space == "original" else r.sse_level_space
        for r in results
    ]
    steps = tuple(
        step_improvement(series[i], series[i + 1]) for i in range(len(series) - 1)
    )
    total = math.fsum(steps) if steps else 0.0
    return EvaluationReport(
        dataset=name,
        space=space,
        levels=results,
        step_improvements=steps,
        total_improvement=total,
    )


# --- serialization ----------------------------------------------------------


def report_to_json(report: EvaluationReport) -> str:
    payload = {
        "dataset": report.dataset,
        "space": report.space,
        "levels": [
            {
                "level": r.level,
                "k": r.k,
                "sse_original_space": r.sse_original_space,
                "sse_level_space": r.sse_level_space,
            }
            for r in report.levels
        ],
        "step_improvements": list(report.step_improvements),
        "total_improvement": report.total_improvement,
    }
    return json.dumps(payload, indent=2) + "\n"


def report_from_json(text: str) -> EvaluationReport:
    payload = json.loads(text)
    return EvaluationReport(
        dataset=payload["dataset"],
        space=payload["space"],
        levels=tuple(
            LevelResult(
                level=r["level"],
                k=r["k"],
                sse_original_space=r["sse_original_space"],
                sse_level_space=r["sse_level_space"],
            )
            for r in payload["levels"]
        ),
        step_improvements=tuple(payload["step_improvements"]),
        total_improvement=payload["total_improvement"],
    )


def _fmt2(v: float) -> str:
    s = f"{v:.2f}"
    return "0.00" if s == "-0.00" else s


def report_to_csv_tables(report: EvaluationReport) -> dict[str, str]:
    """Three small CSV tables: per-level SSE in the driving space,
    step/total improvement percentages, and per-level cluster counts."""
    name = report.dataset
    sse_rows = [f"L,{name}"]
    k_rows = [f"L,{name}"]
    for r in report.levels:
        driving = (
            r.sse_original_space if report.space == "original" else r.sse_level_space
        )
        sse_rows.append(f"L{r.level},{_fmt2(driving)}")
        k_rows.append(f"L{r.level},{r.k}")
    imp_rows = [f"Enhance,{name}"]
    for i, step in enumerate(report.step_improvements):
        imp_rows.append(
            f"L{report.levels[i].level} to L{report.levels[i + 1].level},{_fmt2(step)}"
        )
    imp_rows.append(f"Total,{_fmt2(report.total_improvement)}")
    return {
        "sse_levels.csv": "\n".join(sse_rows) + "\n",
        "improvements.csv": "\n".join(imp_rows) + "\n",
        "cluster_counts.csv": "\n".join(k_rows) + "\n",
    }


def format_summary(report: EvaluationReport) -> str:
    """Human-readable per-level summary printed by the CLI."""
    lines = [
        f"dataset: {report.dataset}",
        f"improvement space: {report.space}",
        "level  k      SSE(original)  SSE(level)",
    ]
    for r in report.levels:
        lines.append(
            f"L{r.level:<5} {r.k:<6} {_fmt2(r.sse_original_space):>13}  {_fmt2(r.sse_level_space):>10}"
        )
    for i, step in enumerate(report.step_improvements):
        lines.append(
            f"improvement L{report.levels[i].level} to "
            f"L{report.levels[i + 1].level}: {_fmt2(step)}%"
        )
    lines.append(f"total improvement: {_fmt2(report.total_improvement)}%")
    return "\n".join(lines) + "\n"
