"""Ontology-guided clustering of numerical datasets.

Pipeline: parse a level-stratified domain ontology, normalize the dataset
to [0, 1], roll attributes up the ontology by recursive group averaging,
cluster every level with a parameter-free GA/k-means hybrid, and report SSE
plus level-to-level improvement percentages.
"""

from .ontology import (
    Concept,
    Ontology,
    parse_ontology,
    serialize_ontology,
    concepts_at_level,
    children_of,
    load_tro,
    tro_path,
)
from .dataset import ColumnRole, DataMatrix, IngestReport, load_csv, normalize, parse_schema
from .projection import LevelDataset, project, project_all
from .clustering import (
    Clustering,
    GAConfig,
    DegenerateDataWarning,
    fitness,
    genetic_cluster,
    genetic_cluster_detailed,
    kmeans,
)
from .evaluation import (
    EvaluationReport,
    LevelResult,
    build_report,
    evaluate_level,
    report_from_json,
    report_to_json,
    sse,
    step_improvement,
    total_improvement,
)
from .errors import DataError, InvariantError, OntologyError

__version__ = "0.1.0"

__all__ = [
    "Concept",
    "Ontology",
    "parse_ontology",
    "serialize_ontology",
    "concepts_at_level",
    "children_of",
    "load_tro",
    "tro_path",
    "ColumnRole",
    "DataMatrix",
    "IngestReport",
    "load_csv",
    "normalize",
    "parse_schema",
    "LevelDataset",
    "project",
    "project_all",
    "Clustering",
    "GAConfig",
    "DegenerateDataWarning",
    "fitness",
    "genetic_cluster",
    "genetic_cluster_detailed",
    "kmeans",
    "EvaluationReport",
    "LevelResult",
    "build_report",
    "evaluate_level",
    "report_from_json",
    "report_to_json",
    "sse",
    "step_improvement",
    "total_improvement",
    "DataError",
    "InvariantError",
    "OntologyError",
]
