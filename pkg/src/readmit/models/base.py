"""Common contract for all five learners: train on a Dataset, score in [0, 1]."""

from __future__ import annotations

import numpy as np

from ..errors import DataError
from ..preprocess import Dataset, FeatureSchema


class Scorer:
    """A trained model exposing a deterministic risk score per instance.

    Subclasses set `kind` and implement `_score_values`. Scores are the
    positive-class risk: higher means greater readmission risk.
    """

    kind: str = "abstract"

    def __init__(self, fingerprint: str):
        self.fingerprint = fingerprint

    def check_schema(self, dataset: Dataset) -> None:
        got = dataset.schema.fingerprint()
        if got != self.fingerprint:
            raise DataError(
                f"{self.kind}: schema fingerprint mismatch "
                f"(model {self.fingerprint}, data {got})"
            )

    def score(self, dataset: Dataset) -> np.ndarray:
        """Risk scores in [0, 1] for every encounter in the dataset."""
        self.check_schema(dataset)
        scores = self._score_values(dataset.values)
        return np.clip(scores, 0.0, 1.0)

    def _score_values(self, values: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def to_jsonable(self) -> dict:
        raise NotImplementedError


def nominal_mask(schema: FeatureSchema) -> np.ndarray:
    return np.array([f.kind == "nominal" for f in schema.features], dtype=bool)


def nominal_cardinalities(schema: FeatureSchema) -> np.ndarray:
    """Vocabulary sizes per feature (0 for numeric columns)."""
    return np.array(
        [len(f.values) if f.kind == "nominal" else 0 for f in schema.features],
        dtype=np.int64,
    )


def require_both_classes(y: np.ndarray, context: str) -> None:
    if len(y) == 0 or y.min() == y.max():
        raise DataError(f"{context}: training data must contain both classes")
