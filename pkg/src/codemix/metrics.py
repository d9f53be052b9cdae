"""Classification evaluation: accuracy, per-class and macro P/R/F1, confusion.

Macro averages are unweighted means over the declared label set; a class
absent from both truth and prediction contributes zeros (the zero-division
convention), keeping macro scores comparable across runs.
"""

import json
from dataclasses import dataclass

from .errors import LengthMismatch, UnknownLabel

__all__ = ["ClassMetrics", "EvalReport", "evaluate"]


@dataclass(frozen=True)
class ClassMetrics:
    precision: float
    recall: float
    f1: float


@dataclass(frozen=True)
class EvalReport:
    accuracy: float
    per_class: dict[str, ClassMetrics]
    macro_precision: float
    macro_recall: float
    macro_f1: float
    confusion: tuple[tuple[int, ...], ...]  # rows = true label, cols = predicted
    labels: tuple[str, ...]  # row/column order of the confusion matrix
    n: int

    def to_dict(self) -> dict:
        return {
            "accuracy": self.accuracy,
            "per_class": {
                label: {"precision": m.precision, "recall": m.recall, "f1": m.f1}
                for label, m in self.per_class.items()
            },
            "macro_precision": self.macro_precision,
            "macro_recall": self.macro_recall,
            "macro_f1": self.macro_f1,
            "confusion": [list(row) for row in self.confusion],
            "labels": list(self.labels),
            "n": self.n,
        }

    def to_json(self) -> str:
        """Canonical JSON rendering (sorted keys, fixed separators)."""
        return json.dumps(self.to_dict(), sort_keys=True, indent=2) + "\n"


def evaluate(y_true, y_pred, label_set) -> EvalReport:
    """Score predictions against gold labels over an ordered label set."""
    y_true = list(y_true)
    y_pred = list(y_pred)
    if len(y_true) != len(y_pred):
        raise LengthMismatch(f"{len(y_true)} gold labels vs {len(y_pred)} predictions")
    if not y_true:
        raise ValueError("cannot evaluate an empty prediction set")
    labels = tuple(label_set)
    index = {label: i for i, label in enumerate(labels)}
    for value in y_true:
        if value not in index:
            raise UnknownLabel(f"gold label {value!r} not in label set {labels}")
    for value in y_pred:
        if value not in index:
            raise UnknownLabel(f"predicted label {value!r} not in label set {labels}")

    k = len(labels)
    confusion = [[0] * k for _ in range(k)]
    for t, p in zip(y_true, y_pred):
        confusion[index[t]][index[p]] += 1

    per_class = {}
    for i, label in enumerate(labels):
        tp = confusion[i][i]
        pred_pos = sum(confusion[r][i] for r in range(k))
        actual_pos = sum(confusion[i])
        precision = tp / pred_pos if pred_pos else 0.0
        recall = tp / actual_pos if actual_pos else 0.0
        f1 = 2 * precision * recall / (precision + recall) if precision + recall else 0.0
        per_class[label] = ClassMetrics(precision, recall, f1)

    n = len(y_true)
    return EvalReport(
        accuracy=sum(confusion[i][i] for i in range(k)) / n,
        per_class=per_class,
        macro_precision=sum(m.precision for m in per_class.values()) / k,
        macro_recall=sum(m.recall for m in per_class.values()) / k,
        macro_f1=sum(m.f1 for m in per_class.values()) / k,
        confusion=tuple(tuple(row) for row in confusion),
        labels=labels,
        n=n,
    )
