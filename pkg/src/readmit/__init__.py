"""Readmission-risk pipeline for diabetic patient encounters.

Preprocessing, five risk scorers, PR-curve evaluation, ablation feature
importance, class-sensitive association rules and cost-sensitive threshold
optimization, reproducible end to end from a single seed.
"""

__version__ = "0.1.0"

from .config import RunConfig
from .errors import DataError, NumericalError, ReadmitError, UsageError
from .ingest import IdMapping, RawEncounter, load_dataset, load_id_mappings
from .metrics import ConfusionMatrix, PRCurve, auprc, confusion, pr_curve, precision, recall
from .preprocess import (Dataset, EncounterVector, FeatureSchema, SplitPlan, Task,
                         build_schema, build_vectors, encode_onehot, filter_rows,
                         group_icd9, label, make_split)

__all__ = [
    "__version__",
    "RunConfig",
    "ReadmitError", "UsageError", "DataError", "NumericalError",
    "RawEncounter", "IdMapping", "load_dataset", "load_id_mappings",
    "ConfusionMatrix", "PRCurve", "confusion", "precision", "recall",
    "pr_curve", "auprc",
    "Dataset", "EncounterVector", "FeatureSchema", "SplitPlan", "Task",
    "build_schema", "build_vectors", "encode_onehot", "filter_rows",
    "group_icd9", "label", "make_split",
]
