"""Ablation feature importance via forest out-of-bag error.

Importance of a feature = OOB error of a forest retrained without it minus
the baseline OOB error of the full-feature forest. All runs share one seed;
negative importances mark noise features. Two framings: HIGH_RISK separates
any readmission from none, DIFFERENTIATE separates short-term from long-term
readmissions among readmitted encounters only.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import DataError
from .models.base import nominal_mask
from .models.forest import ForestParams, RandomForest, oob_error_forest
from .preprocess import Dataset, READMIT_LT30, READMIT_NO


class AblationTask(Enum):
    HIGH_RISK = "high_risk"            # readmitted (<30 or >30) vs never
    DIFFERENTIATE = "differentiate"    # <30 vs >30 within readmitted only


@dataclass(frozen=True)
class AblationRow:
    feature: str
    oob_error_without: float
    importance: float  # oob_error_without - baseline


@dataclass
class AblationReport:
    task: str
    baseline_oob_error: float
    rows: list[AblationRow]  # schema (Table I) order
    n_rows_used: int
    subsample_fraction: float
    seed: int

    def sorted_by_importance(self) -> list[AblationRow]:
        return sorted(self.rows, key=lambda r: (-r.importance, r.feature))

    def to_jsonable(self) -> dict:
        return {
            "task": self.task,
            "baseline_oob_error": self.baseline_oob_error,
            "n_rows_used": self.n_rows_used,
            "subsample_fraction": self.subsample_fraction,
            "seed": self.seed,
            "features": [
                {"feature": r.feature, "oob_error_without": r.oob_error_without,
                 "importance": r.importance}
                for r in self.rows
            ],
        }


def _task_arrays(dataset: Dataset, task: AblationTask) -> tuple[np.ndarray, np.ndarray]:
    if task is AblationTask.HIGH_RISK:
        return dataset.values, (dataset.readmitted != READMIT_NO).astype(np.int8)
    keep = dataset.readmitted != READMIT_NO
    if not keep.any():
        raise DataError("ablation: no readmitted encounters for DIFFERENTIATE task")
    return (dataset.values[keep],
            (dataset.readmitted[keep] == READMIT_LT30).astype(np.int8))


def _subsample(X: np.ndarray, y: np.ndarray, fraction: float,
               seed: int) -> tuple[np.ndarray, np.ndarray]:
    """Seeded stratified row subsample preserving the class mix."""
    if not 0 < fraction <= 1:
        raise DataError("ablation: subsample fraction must be in (0, 1]")
    if fraction == 1.0:
        return X, y
    rng = np.random.default_rng([seed, 0xAB7A])
    chosen = []
    for cls in np.unique(y):
        idx = np.flatnonzero(y == cls)
        take = max(1, round(fraction * len(idx)))
        chosen.append(rng.permutation(idx)[:take])
    idx = np.sort(np.concatenate(chosen))
    return X[idx], y[idx]


def ablation_study(dataset: Dataset, task: AblationTask, params: ForestParams,
                   subsample_fraction: float = 1.0) -> AblationReport:
    """Baseline forest plus one retrain per removed feature, all on one seed."""
    X, y = _task_arrays(dataset, task)
    X, y = _subsample(X, y, subsample_fraction, params.seed)
    is_nominal = nominal_mask(dataset.schema)
    if X.shape[1] < 2:
        raise DataError("ablation: need at least two features")

    baseline_forest = RandomForest.fit(X, y, is_nominal, params)
    baseline = oob_error_forest(baseline_forest, X, y).error

    rows = []
    for j, name in enumerate(dataset.schema.names):
        keep = [k for k in range(X.shape[1]) if k != j]
        forest = RandomForest.fit(X[:, keep], y, is_nominal[keep], params)
        err = oob_error_forest(forest, X[:, keep], y).error
        rows.append(AblationRow(name, err, err - baseline))
    return AblationReport(task.value, baseline, rows, len(y),
                          subsample_fraction, params.seed)
