"""Per-level datasets by recursive child-averaging up the ontology.

Level 1 is the original feature matrix reordered to leaf declaration order.
The value of a concept at level l > 1 is, per record, the plain mean of its
children's level-(l-1) values: children get equal weight, so an uneven
subtree is NOT the same as a flat mean over its leaves.
"""

from dataclasses import dataclass

import numpy as np

from .dataset import DataMatrix
from .errors import DataError
from .ontology import Ontology, concepts_at_level, children_of


@dataclass(frozen=True)
class LevelDataset:
    """Projection of a DataMatrix onto one ontology level."""

    level: int
    concept_names: tuple[str, ...]
    values: np.ndarray

    def __post_init__(self):
        vals = np.array(self.values, dtype=np.float64, copy=True)
        if vals.ndim != 2:
            raise DataError(f"values must be 2-D, got shape {vals.shape}")
        if vals.shape[1] != len(self.concept_names):
            raise DataError(
                f"{len(self.concept_names)} concept names for {vals.shape[1]} columns"
            )
        if not np.all(np.isfinite(vals)):
            raise DataError("level dataset contains non-finite values")
        vals.flags.writeable = False
        object.__setattr__(self, "values", vals)

    @property
    def n_records(self):
        return self.values.shape[0]


def _level_one(m: DataMatrix, o: Ontology) -> LevelDataset:
    col_index = {name: j for j, name in enumerate(m.column_names)}
    leaves = concepts_at_level(o, 1)
    missing = [c.column for c in leaves if c.column not in col_index]
    if missing:
        raise DataError(
            f"ontology leaf columns not present in data: {sorted(missing)}"
        )
    idx = [col_index[c.column] for c in leaves]
    return LevelDataset(
        level=1,
        concept_names=tuple(c.name for c in leaves),
        values=m.values[:, idx],
    )


def _lift(prev: LevelDataset, o: Ontology, level: int) -> LevelDataset:
    pos = {name: j for j, name in enumerate(prev.concept_names)}
    concepts = concepts_at_level(o, level)
    cols = np.empty((prev.values.shape[0], len(concepts)), dtype=np.float64)
    for j, concept in enumerate(concepts):
        child_idx = [pos[ch.name] for ch in children_of(o, concept.name)]
        # np.mean sums pairwise, so child order cannot shift the result
        # beyond ~1e-16 relative
        cols[:, j] = np.mean(prev.values[:, child_idx], axis=1)
    return LevelDataset(
        level=level, concept_names=tuple(c.name for c in concepts), values=cols
    )


def project(m: DataMatrix, o: Ontology, level: int) -> LevelDataset:
    """Project a normalized matrix onto one ontology level."""
    if not m.normalized:
        raise DataError("projection requires a normalized DataMatrix")
    concepts_at_level(o, level)  # validates the level range
    current = _level_one(m, o)
    for lvl in range(2, level + 1):
        current = _lift(current, o, lvl)
    return current


def project_all(m: DataMatrix, o: Ontology) -> list[LevelDataset]:
    """Projections for every level 1..depth, each computed from the one
    below it."""
    if not m.normalized:
        raise DataError("projection requires a normalized DataMatrix")
    out = [_level_one(m, o)]
    for lvl in range(2, o.depth + 1):
        out.append(_lift(out[-1], o, lvl))
    return out
