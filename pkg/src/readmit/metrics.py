"""Confusion matrices, precision/recall and the precision-recall curve.

The curve has one point per distinct score, thresholds descending, and its
area uses average-precision summation (no linear interpolation between
points, which overstates PR-space performance). Tied scores fall under a
single threshold so intra-tie ordering cannot affect the curve.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DataError


@dataclass(frozen=True)
class ConfusionMatrix:
    tp: int
    fp: int
    fn: int
    tn: int

    @property
    def total(self) -> int:
        return self.tp + self.fp + self.fn + self.tn

    def __add__(self, other: "ConfusionMatrix") -> "ConfusionMatrix":
        return ConfusionMatrix(self.tp + other.tp, self.fp + other.fp,
                               self.fn + other.fn, self.tn + other.tn)

    def to_jsonable(self) -> dict:
        return {"tp": self.tp, "fp": self.fp, "fn": self.fn, "tn": self.tn}


def confusion(scores: np.ndarray, labels: np.ndarray, threshold: float) -> ConfusionMatrix:
    """Counts with predicted-positive defined as score >= threshold."""
    scores = np.asarray(scores, dtype=np.float64)
    labels = np.asarray(labels)
    if len(scores) == 0:
        raise DataError("confusion: empty input")
    if len(scores) != len(labels):
        raise DataError("confusion: scores and labels length mismatch")
    pred = scores >= threshold
    pos = labels == 1
    tp = int(np.count_nonzero(pred & pos))
    fp = int(np.count_nonzero(pred & ~pos))
    fn = int(np.count_nonzero(~pred & pos))
    tn = int(np.count_nonzero(~pred & ~pos))
    return ConfusionMatrix(tp, fp, fn, tn)


def precision(cm: ConfusionMatrix) -> float:
    """TP / (TP + FP); vacuously 1.0 when nothing is predicted positive."""
    denom = cm.tp + cm.fp
    if denom == 0:
        return 1.0
    return cm.tp / denom


def recall(cm: ConfusionMatrix) -> float:
    """TP / (TP + FN); requires at least one ground-truth positive."""
    denom = cm.tp + cm.fn
    if denom == 0:
        raise DataError("recall: no ground-truth positives")
    return cm.tp / denom


@dataclass(frozen=True)
class PRCurve:
    """(threshold, recall, precision) points, thresholds descending, plus area."""

    points: tuple[tuple[float, float, float], ...]
    area: float

    def to_csv_rows(self) -> list[tuple[float, float, float]]:
        return [(t, r, p) for t, r, p in self.points]


def pr_curve(scores: np.ndarray, labels: np.ndarray) -> PRCurve:
    """PR curve over every distinct score threshold.

    Area = sum over threshold steps of precision * recall-increment
    (average precision). Requires at least one positive and one negative.
    """
    scores = np.asarray(scores, dtype=np.float64)
    labels = np.asarray(labels)
    if len(scores) != len(labels):
        raise DataError("pr_curve: scores and labels length mismatch")
    n_pos = int(np.count_nonzero(labels == 1))
    n_neg = len(labels) - n_pos
    if n_pos == 0 or n_neg == 0:
        raise DataError("pr_curve: need at least one positive and one negative")

    order = np.argsort(-scores, kind="stable")
    s = scores[order]
    y = (labels[order] == 1).astype(np.int64)
    # last index of each tied block of scores
    block_end = np.flatnonzero(np.diff(s) != 0)
    block_end = np.append(block_end, len(s) - 1)
    tp = np.cumsum(y)[block_end]
    pp = block_end + 1  # predicted positives at each threshold
    rec = tp / n_pos
    prec = tp / pp
    thresholds = s[block_end]

    rec_prev = np.concatenate([[0.0], rec[:-1]])
    area = float(np.sum((rec - rec_prev) * prec))
    points = tuple(
        (float(t), float(r), float(p)) for t, r, p in zip(thresholds, rec, prec)
    )
    return PRCurve(points, area)


def auprc(scores: np.ndarray, labels: np.ndarray) -> float:
    return pr_curve(scores, labels).area
