"""Binary classification metrics: balanced accuracy and Matthews
correlation, computed from confusion-matrix counts."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class ConfusionMatrix:
    tp: int = 0
    fp: int = 0
    tn: int = 0
    fn: int = 0

    def __post_init__(self):
        if min(self.tp, self.fp, self.tn, self.fn) < 0:
            raise ValueError("confusion counts must be >= 0")

    @property
    def total(self) -> int:
        return self.tp + self.fp + self.tn + self.fn

    def __add__(self, other: "ConfusionMatrix") -> "ConfusionMatrix":
        return ConfusionMatrix(
            self.tp + other.tp, self.fp + other.fp, self.tn + other.tn, self.fn + other.fn
        )


def confusion(y_true, y_pred) -> ConfusionMatrix:
    """Counts with class 1 (`high`) as the positive class."""
    y_true = np.asarray(y_true, dtype=np.int64)
    y_pred = np.asarray(y_pred, dtype=np.int64)
    if y_true.shape != y_pred.shape:
        raise ValueError("label vectors differ in length")
    return ConfusionMatrix(
        tp=int(np.sum((y_true == 1) & (y_pred == 1))),
        fp=int(np.sum((y_true == 0) & (y_pred == 1))),
        tn=int(np.sum((y_true == 0) & (y_pred == 0))),
        fn=int(np.sum((y_true == 1) & (y_pred == 0))),
    )


def balanced_accuracy_ex(cm: ConfusionMatrix) -> tuple[float, bool]:
    """(balanced accuracy, degenerate flag).

    Degenerate when one true class is absent; then the defined class rate
    alone is returned.
    """
    pos = cm.tp + cm.fn
    neg = cm.tn + cm.fp
    if pos == 0 and neg == 0:
        return 0.0, True
    if pos == 0:
        return cm.tn / neg, True
    if neg == 0:
        return cm.tp / pos, True
    return (cm.tp / pos + cm.tn / neg) / 2.0, False


def balanced_accuracy(cm: ConfusionMatrix) -> float:
    """Mean of true-positive rate and true-negative rate."""
    return balanced_accuracy_ex(cm)[0]


def mcc(cm: ConfusionMatrix) -> float:
    """Matthews correlation; 0.0 when any denominator factor is zero."""
    denom = (cm.tp + cm.fp) * (cm.tp + cm.fn) * (cm.tn + cm.fp) * (cm.tn + cm.fn)
    if denom == 0:
        return 0.0
    return (cm.tp * cm.tn - cm.fp * cm.fn) / math.sqrt(denom)
