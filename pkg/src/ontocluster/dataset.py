"""CSV ingestion with declared column roles, and min-max normalization.

Only columns with the ``feature`` role enter the matrix. Records with a
missing or unparseable feature value are dropped and counted; columns that
are constant across the surviving records are excluded with a warning,
since they carry no clustering information and break min-max scaling.
"""

import csv
import io
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .errors import DataError, InvariantError
from . import lineformat


class ColumnRole(Enum):
    FEATURE = "feature"
    IDENTIFIER = "id"
    CLASS = "class"
    EXCLUDED = "excluded"


@dataclass(frozen=True)
class DataMatrix:
    """n records x d feature columns of float64, optionally normalized to
    the unit interval (in which case every column attains both 0 and 1)."""

    column_names: tuple[str, ...]
    values: np.ndarray
    normalized: bool = False

    def __post_init__(self):
        vals = np.array(self.values, dtype=np.float64, copy=True)
        if vals.ndim != 2:
            raise DataError(f"values must be 2-D, got shape {vals.shape}")
        n, d = vals.shape
        if n < 1 or d < 1:
            raise DataError(f"matrix must be at least 1x1, got {n}x{d}")
        if d != len(self.column_names):
            raise DataError(
                f"{len(self.column_names)} column names for {d} columns"
            )
        if len(set(self.column_names)) != d:
            raise DataError("column names must be unique")
        if not np.all(np.isfinite(vals)):
            raise DataError("matrix contains non-finite values")
        if self.normalized:
            if vals.min() < 0.0 or vals.max() > 1.0:
                raise DataError("normalized matrix has values outside [0, 1]")
            if not (np.all(vals.min(axis=0) == 0.0) and np.all(vals.max(axis=0) == 1.0)):
                raise DataError("normalized matrix must attain 0 and 1 in every column")
        vals.flags.writeable = False
        object.__setattr__(self, "values", vals)

    @property
    def n_records(self):
        return self.values.shape[0]

    @property
    def n_columns(self):
        return self.values.shape[1]


@dataclass
class IngestReport:
    rows_read: int = 0
    rows_dropped: int = 0
    columns_excluded: list = field(default_factory=list)  # (name, reason)
    warnings: list = field(default_factory=list)


def parse_schema(text: str) -> dict[str, ColumnRole]:
    """Parse a role-schema file: ``column<TAB>NAME<TAB>role=<role>`` per
    line, '#' comments and blank lines ignored."""
    roles = {}
    tokens = {r.value: r for r in ColumnRole}
    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        try:
            fields = lineformat.split_fields(line)
            if len(fields) != 3 or lineformat.parse_value(fields[0]) != "column":
                raise lineformat.FieldSyntaxError(
                    "expected: column<TAB>NAME<TAB>role=<role>"
                )
            name = lineformat.parse_value(fields[1])
            key, role = lineformat.split_keyed(fields[2])
            if key != "role" or role not in tokens:
                raise lineformat.FieldSyntaxError(f"unknown role {role!r}")
        except lineformat.FieldSyntaxError as exc:
            raise DataError(f"schema line {lineno}: {exc}") from exc
        if name in roles:
            raise DataError(f"schema line {lineno}: column {name!r} listed twice")
        roles[name] = tokens[role]
    return roles


def _parse_cell(cell: str):
    cell = cell.strip()
    if not cell:
        return None
    try:
        v = float(cell)
    except ValueError:
        return None
    if not np.isfinite(v):
        return None
    return v


def _is_sequential(col: np.ndarray) -> bool:
    if col.size < 2 or np.any(col != np.floor(col)):
        return False
    return bool(np.all(np.diff(col) == 1.0))


def load_csv(text: str, schema: dict[str, ColumnRole] | None = None):
    """Read a header-first CSV into a feature DataMatrix plus an ingest
    report. ``schema`` maps column names to roles; unmentioned columns
    default to feature. Returns (DataMatrix, IngestReport)."""
    schema = dict(schema or {})
    reader = csv.reader(io.StringIO(text))
    try:
        header = next(reader)
    except StopIteration:
        raise DataError("empty file: no header row") from None
    header = [h.strip() for h in header]
    if len(set(header)) != len(header):
        raise DataError("duplicate column names in header")
    for name in schema:
        if name not in header:
            raise DataError(f"schema names unknown column {name!r}")

    report = IngestReport()
    feature_idx = []
    feature_names = []
    for i, name in enumerate(header):
        role = schema.get(name, ColumnRole.FEATURE)
        if role is ColumnRole.FEATURE:
            feature_idx.append(i)
            feature_names.append(name)
        else:
            report.columns_excluded.append((name, f"role:{role.value}"))
    if not feature_idx:
        raise DataError("no feature columns in header")

    rows = []
    for raw in reader:
        if not raw:
            continue  # a truly blank line is not a record
        report.rows_read += 1
        if len(raw) != len(header):
            report.rows_dropped += 1
            continue
        parsed = [_parse_cell(raw[i]) for i in feature_idx]
        if any(v is None for v in parsed):
            report.rows_dropped += 1
            continue
        rows.append(parsed)
    if not rows:
        raise DataError("no records survive ingestion")

    values = np.array(rows, dtype=np.float64)

    # constant columns are detected on the surviving records only
    keep = []
    for j, name in enumerate(feature_names):
        col = values[:, j]
        if col.min() == col.max():
            report.columns_excluded.append((name, "constant"))
            report.warnings.append(
                f"column {name!r} is constant across surviving records; excluded"
            )
        else:
            keep.append(j)
            if _is_sequential(col):
                report.warnings.append(
                    f"column {name!r} looks like a sequential id "
                    f"(consecutive integers); consider role=id"
                )
    if not keep:
        raise DataError("no feature columns survive (all constant)")

    matrix = DataMatrix(
        column_names=tuple(feature_names[j] for j in keep),
        values=values[:, keep],
        normalized=False,
    )
    assert report.rows_read == matrix.n_records + report.rows_dropped
    return matrix, report


def normalize(m: DataMatrix) -> DataMatrix:
    """Min-max rescale every column onto [0, 1]. The column extremes map to
    exactly 0.0 and 1.0. Normalizing an already-normalized matrix returns
    it unchanged."""
    if m.normalized:
        return m
    lo = m.values.min(axis=0)
    hi = m.values.max(axis=0)
    if np.any(hi == lo):
        bad = m.column_names[int(np.argmax(hi == lo))]
        raise InvariantError(
            f"constant column {bad!r} reached normalize; load_csv should have excluded it"
        )
    out = (m.values - lo) / (hi - lo)
    # pin the extremes symbolically so 0 and 1 hold exactly
    out[m.values == lo[None, :]] = 0.0
    out[m.values == hi[None, :]] = 1.0
    return DataMatrix(column_names=m.column_names, values=out, normalized=True)
