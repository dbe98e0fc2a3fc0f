"""Classification metrics computed from scores: accuracy, precision,
recall, area under the precision-recall curve (step integral) and area
under the ROC curve (rank statistic with tie averaging).

Binary problems score the positive class (label 1); multi-class problems
macro-average one-vs-rest.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import asdict, dataclass

import numpy as np

__all__ = ["MetricReport", "average_precision", "roc_auc", "evaluate_scores"]


@dataclass(frozen=True)
class MetricReport:
    accuracy: float
    precision: float
    recall: float
    average_precision: float
    auc: float

    def as_dict(self) -> dict[str, float]:
        return asdict(self)

    def to_json(self) -> str:
        return json.dumps(self.as_dict(), sort_keys=True, indent=2) + "\n"

    def to_csv(self) -> str:
        buffer = io.StringIO()
        writer = csv.writer(buffer, lineterminator="\n")
        writer.writerow(["metric", "value"])
        for name, value in self.as_dict().items():
            writer.writerow([name, f"{value:.6f}"])
        return buffer.getvalue()


def _binary_counts(labels: np.ndarray, predicted: np.ndarray) -> tuple[int, int, int]:
    tp = int(np.sum(predicted & labels))
    fp = int(np.sum(predicted & ~labels))
    fn = int(np.sum(~predicted & labels))
    return tp, fp, fn


def average_precision(labels: np.ndarray, scores: np.ndarray) -> float:
    """Step integral sum((R_i - R_{i-1}) * P_i) over descending score
    thresholds; ties share a threshold."""
    labels = np.asarray(labels, dtype=bool)
    scores = np.asarray(scores, dtype=np.float64)
    n_pos = int(labels.sum())
    if n_pos == 0:
        return 0.0
    order = np.argsort(-scores, kind="stable")
    labels = labels[order]
    scores = scores[order]
    # last index of each distinct-threshold group
    boundaries = np.flatnonzero(np.diff(scores)) if len(scores) > 1 else np.array([], int)
    cut = np.append(boundaries, len(scores) - 1)
    tp = np.cumsum(labels)[cut]
    count = cut + 1
    recall = tp / n_pos
    precision = tp / count
    prev_recall = np.concatenate(([0.0], recall[:-1]))
    return float(np.sum((recall - prev_recall) * precision))


def roc_auc(labels: np.ndarray, scores: np.ndarray) -> float:
    """Mann-Whitney rank formulation; tied scores get averaged ranks.
    Degenerate single-class inputs return 0.5."""
    labels = np.asarray(labels, dtype=bool)
    scores = np.asarray(scores, dtype=np.float64)
    n_pos = int(labels.sum())
    n_neg = labels.size - n_pos
    if n_pos == 0 or n_neg == 0:
        return 0.5
    order = np.argsort(scores, kind="stable")
    ranks = np.empty(scores.size, dtype=np.float64)
    sorted_scores = scores[order]
    i = 0
    while i < len(sorted_scores):
        j = i
        while j + 1 < len(sorted_scores) and sorted_scores[j + 1] == sorted_scores[i]:
            j += 1
        ranks[order[i : j + 1]] = (i + j) / 2 + 1  # average 1-based rank
        i = j + 1
    rank_sum = float(ranks[labels].sum())
    return (rank_sum - n_pos * (n_pos + 1) / 2) / (n_pos * n_neg)


def evaluate_scores(labels: np.ndarray, probabilities: np.ndarray) -> MetricReport:
    """Metric suite from class probabilities (rows sum to 1).

    Two columns: the positive class is column 1.  More: all threshold-free
    metrics and precision/recall macro-average one-vs-rest.
    """
    labels = np.asarray(labels, dtype=np.int64)
    probabilities = np.asarray(probabilities, dtype=np.float64)
    predicted = probabilities.argmax(axis=1)
    accuracy = float(np.mean(predicted == labels))
    num_classes = probabilities.shape[1]

    classes = [1] if num_classes == 2 else list(range(num_classes))
    precisions, recalls, aps, aucs = [], [], [], []
    for cls in classes:
        is_cls = labels == cls
        says_cls = predicted == cls
        tp, fp, fn = _binary_counts(is_cls, says_cls)
        precisions.append(tp / (tp + fp) if tp + fp else 0.0)
        recalls.append(tp / (tp + fn) if tp + fn else 0.0)
        aps.append(average_precision(is_cls, probabilities[:, cls]))
        aucs.append(roc_auc(is_cls, probabilities[:, cls]))
    return MetricReport(
        accuracy=accuracy,
        precision=float(np.mean(precisions)),
        recall=float(np.mean(recalls)),
        average_precision=float(np.mean(aps)),
        auc=float(np.mean(aucs)),
    )
