"""Binary classification metrics used for test loss and curve reporting.

Class 1 is "positive" throughout: confusion counts, IOU, dice, and the
AUC score orientation all follow that convention.  The forest predicts
the class-0 probability, so AUC scores are ``1 - p0``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

METRIC_IDS = ("accuracy", "zero_one", "iou", "dice", "auc")


@dataclass(frozen=True)
class ConfusionCounts:
    tp: int
    fp: int
    tn: int
    fn: int

    def __post_init__(self):
        if min(self.tp, self.fp, self.tn, self.fn) < 0:
            raise ValueError("confusion counts must be non-negative")

    @property
    def total(self) -> int:
        return self.tp + self.fp + self.tn + self.fn


def counts_from_predictions(predicted, actual) -> ConfusionCounts:
    p = np.asarray(predicted)
    a = np.asarray(actual)
    if p.shape != a.shape:
        raise ValueError("predicted and actual labels must align")
    return ConfusionCounts(
        tp=int(np.sum((p == 1) & (a == 1))),
        fp=int(np.sum((p == 1) & (a == 0))),
        tn=int(np.sum((p == 0) & (a == 0))),
        fn=int(np.sum((p == 0) & (a == 1))),
    )


def accuracy(counts: ConfusionCounts) -> float:
    if counts.total == 0:
        raise ValueError("no evaluated samples")
    return (counts.tp + counts.tn) / counts.total


def zero_one_loss(counts: ConfusionCounts) -> float:
    return 1.0 - accuracy(counts)


def iou(counts: ConfusionCounts) -> float:
    """Intersection over union of the positive class; 1.0 when empty."""
    denom = counts.tp + counts.fp + counts.fn
    return counts.tp / denom if denom else 1.0


def dice(counts: ConfusionCounts) -> float:
    """Dice overlap of the positive class; 1.0 when empty."""
    denom = 2 * counts.tp + counts.fp + counts.fn
    return 2 * counts.tp / denom if denom else 1.0


def auc_roc(scores, labels) -> float:
    """Rank-based (Mann-Whitney) area under the ROC curve.

    ``scores`` orient toward class 1; ties contribute one half.  Raises on
    a single-class label vector, where the area is undefined.
    """
    s = np.asarray(scores, dtype=np.float64)
    y = np.asarray(labels)
    if s.shape != y.shape or s.ndim != 1:
        raise ValueError("scores and labels must be equally long vectors")
    n1 = int(np.sum(y == 1))
    n0 = len(y) - n1
    if n1 == 0 or n0 == 0:
        raise ValueError("AUC is undefined for a single-class label vector")
    order = np.argsort(s, kind="stable")
    sorted_scores = s[order]
    # midranks: equal scores share the average of their 1-based positions
    new_group = np.empty(len(s), dtype=bool)
    new_group[0] = True
    new_group[1:] = sorted_scores[1:] != sorted_scores[:-1]
    group = np.cumsum(new_group) - 1
    first = np.flatnonzero(new_group)
    size = np.diff(np.append(first, len(s)))
    ranks = np.empty(len(s), dtype=np.float64)
    ranks[order] = (first + (size - 1) / 2.0 + 1.0)[group]
    rank_sum = float(ranks[y == 1].sum())
    return (rank_sum - n1 * (n1 + 1) / 2.0) / (n1 * n0)


def predicted_labels(proba_class0) -> np.ndarray:
    """Hard labels from class-0 probabilities; ties (p = 0.5) go to class 0."""
    p0 = np.asarray(proba_class0, dtype=np.float64)
    return np.where(p0 < 0.5, 1, 0)


def evaluate_probability_metric(metric: str, proba_class0, labels) -> float:
    """Evaluate a metric id against class-0 probabilities."""
    if metric not in METRIC_IDS:
        raise ValueError(f"unknown metric {metric!r}; expected one of {METRIC_IDS}")
    y = np.asarray(labels)
    if metric == "auc":
        return auc_roc(1.0 - np.asarray(proba_class0, dtype=np.float64), y)
    counts = counts_from_predictions(predicted_labels(proba_class0), y)
    if metric == "accuracy":
        return accuracy(counts)
    if metric == "zero_one":
        return zero_one_loss(counts)
    if metric == "iou":
        return iou(counts)
    return dice(counts)


def loss_from_metric(metric: str, proba_class0, labels) -> float:
    """Test loss for strategy learning: 0/1 loss directly, 1 - value otherwise."""
    value = evaluate_probability_metric(metric, proba_class0, labels)
    return value if metric == "zero_one" else 1.0 - value
