"""Cost-sensitive threshold selection from the saved-cost matrix.

Acting on a predicted readmission replaces its cost alpha with the cost beta
of one extra admission day, so a true positive saves alpha - beta, a false
positive costs beta, and the other outcomes save nothing. Thresholds are
tuned to maximize total saved cost, with ties broken toward the lower
threshold (more predicted positives: the conservative choice for a
healthcare setting). Dollar arithmetic runs in integer cents.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DataError
from .metrics import ConfusionMatrix, confusion


@dataclass(frozen=True)
class CostParams:
    alpha: float  # dollars per readmission
    beta: float   # dollars per special-diagnosis day

    def __post_init__(self):
        if not (self.alpha > self.beta > 0):
            raise DataError("CostParams: requires alpha > beta > 0")

    @property
    def alpha_cents(self) -> int:
        return round(self.alpha * 100)

    @property
    def beta_cents(self) -> int:
        return round(self.beta * 100)


@dataclass(frozen=True)
class SavedCostMatrix:
    """Per-outcome dollar values: tp = alpha - beta, fp = -beta, fn = tn = 0."""

    tp_value: float
    fp_value: float
    fn_value: float = 0.0
    tn_value: float = 0.0

    @classmethod
    def from_params(cls, params: CostParams) -> "SavedCostMatrix":
        return cls((params.alpha_cents - params.beta_cents) / 100,
                   -params.beta_cents / 100)


def saved_cost(cm: ConfusionMatrix, params: CostParams) -> float:
    """Dollars saved: tp * (alpha - beta) - fp * beta."""
    cents = cm.tp * (params.alpha_cents - params.beta_cents) - cm.fp * params.beta_cents
    return cents / 100


@dataclass
class ThresholdResult:
    threshold: float
    saved_cost_test: float
    confusion: ConfusionMatrix
    extrapolated_total: float | None = None

    def to_jsonable(self) -> dict:
        return {
            "threshold": self.threshold,
            "saved_cost_test": self.saved_cost_test,
            "confusion": self.confusion.to_jsonable(),
            "extrapolated_total": self.extrapolated_total,
        }


def optimize_threshold(scores: np.ndarray, labels: np.ndarray,
                       params: CostParams) -> ThresholdResult:
    """Exhaustive scan over all distinct scores (plus 0 and 1+eps).

    Predicted positive means score >= threshold. Among equal saved costs the
    lowest threshold wins.
    """
    scores = np.asarray(scores, dtype=np.float64)
    labels = np.asarray(labels)
    if len(scores) == 0:
        raise DataError("optimize_threshold: empty input")
    pos = labels == 1
    if not pos.any() or pos.all():
        raise DataError("optimize_threshold: test set must contain both classes")

    candidates = np.concatenate([[0.0], np.unique(scores), [1.0 + 1e-9]])
    candidates = np.unique(candidates)  # ascending; dedupes a literal 0.0 score
    # tp/fp counts at each candidate threshold: counts of scores >= t
    order = np.argsort(scores)
    sorted_pos = pos[order].astype(np.int64)
    cum_pos = np.concatenate([[0], np.cumsum(sorted_pos)])
    total_pos = int(pos.sum())
    first_ge = np.searchsorted(scores[order], candidates, side="left")
    tp = total_pos - cum_pos[first_ge]
    fp = (len(scores) - first_ge) - tp
    saved_cents = tp * (params.alpha_cents - params.beta_cents) - fp * params.beta_cents
    best = int(np.argmax(saved_cents))  # first max = lowest threshold
    threshold = float(candidates[best])
    cm = confusion(scores, labels, threshold)
    return ThresholdResult(threshold, saved_cost(cm, params), cm)


def extrapolate_total(saved_test: float, n_test: int, n_total: int) -> float:
    """Scale test-set savings to the full population by encounter count."""
    if n_test <= 0:
        raise DataError("extrapolate_total: n_test must be positive")
    return saved_test * n_total / n_test


def derive_beta(alpha: float, avg_stay_days: float) -> int:
    """Cost of one admission day, in whole dollars: alpha / average stay."""
    if avg_stay_days <= 0:
        raise DataError("derive_beta: avg_stay_days must be positive")
    return round(alpha / avg_stay_days)
