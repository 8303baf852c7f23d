"""
Hypothesis Reader - Classification Metrics
Confusion counts, precision/recall/F-1 and their aggregations.
"""

from dataclasses import dataclass, field, asdict
from typing import Any, Dict, Hashable, List, Optional, Sequence

import numpy as np
from sklearn.metrics import accuracy_score, confusion_matrix, precision_recall_fscore_support

from src.errors import MisalignedInput

AVERAGES = ('macro', 'weighted', 'micro')


@dataclass(frozen=True)
class ConfusionCounts:
    tp: int
    fp: int
    fn: int
    tn: int

    @property
    def precision(self) -> float:
        return self.tp / (self.tp + self.fp) if self.tp + self.fp > 0 else 0.0

    @property
    def recall(self) -> float:
        return self.tp / (self.tp + self.fn) if self.tp + self.fn > 0 else 0.0


@dataclass
class Metrics:
    """Accuracy, precision, recall and F-1 with an optional per-class breakdown."""
    accuracy: float
    precision: float
    recall: float
    f1: float
    support: int
    per_class: Optional[Dict[str, 'Metrics']] = field(default=None)

    def to_dict(self) -> Dict[str, Any]:
        result = {k: v for k, v in asdict(self).items() if k != 'per_class'}
        if self.per_class is not None:
            result['per_class'] = {name: m.to_dict() for name, m in self.per_class.items()}
        return result


def _check_lengths(preds: Sequence, golds: Sequence) -> None:
    if len(preds) != len(golds):
        raise MisalignedInput(f"{len(preds)} predictions for {len(golds)} gold labels")


def confusion_counts(preds: Sequence[Hashable], golds: Sequence[Hashable],
                     positive_class: Hashable) -> ConfusionCounts:
    """One-vs-rest confusion counts for ``positive_class``."""
    _check_lengths(preds, golds)
    if len(golds) == 0:
        return ConfusionCounts(tp=0, fp=0, fn=0, tn=0)
    p = [x == positive_class for x in preds]
    g = [x == positive_class for x in golds]
    tn, fp, fn, tp = confusion_matrix(g, p, labels=[False, True]).ravel()
    return ConfusionCounts(tp=int(tp), fp=int(fp), fn=int(fn), tn=int(tn))


def f1_score(precision: float, recall: float) -> float:
    """Harmonic mean of precision and recall; 0 when both are 0."""
    if precision + recall == 0:
        return 0.0
    return 2 * (precision * recall) / (precision + recall)


def _accuracy(preds: Sequence, golds: Sequence) -> float:
    return float(accuracy_score(list(golds), list(preds))) if len(golds) > 0 else 0.0


def _scores(preds: Sequence, golds: Sequence, labels: Sequence, average: Optional[str] = None):
    """(precision, recall, f1, support) from sklearn, 0 for undefined ratios."""
    if len(golds) == 0:
        zeros = np.zeros(len(labels)) if average is None else 0.0
        return zeros, zeros, zeros, zeros
    return precision_recall_fscore_support(list(golds), list(preds), labels=list(labels), average=average,
                                           zero_division=0)


def binary_metrics(preds: Sequence[Hashable], golds: Sequence[Hashable],
                   positive_class: Hashable = 1) -> Metrics:
    _check_lengths(preds, golds)
    precision, recall, f1, support = _scores(preds, golds, [positive_class])
    return Metrics(
        accuracy=_accuracy(preds, golds),
        precision=float(precision[0]),
        recall=float(recall[0]),
        f1=float(f1[0]),
        support=int(support[0]),
    )


def multiclass_metrics(preds: Sequence[Hashable], golds: Sequence[Hashable],
                       classes: Sequence[Hashable], average: str = 'macro',
                       scored_classes: Optional[Sequence[Hashable]] = None) -> Metrics:
    """
    Per-class one-vs-rest metrics plus an aggregate.

    ``scored_classes`` restricts which classes enter the aggregate (the
    tagger's overall score covers only the node classes); accuracy always
    uses every item.
    """
    if average not in AVERAGES:
        raise ValueError(f"average must be one of {AVERAGES}, got '{average}'")
    _check_lengths(preds, golds)

    precision, recall, f1, support = _scores(preds, golds, classes)
    per_class: Dict[str, Metrics] = {}
    for i, cls in enumerate(classes):
        c = confusion_counts(preds, golds, cls)
        per_class[str(cls)] = Metrics(
            accuracy=(c.tp + c.tn) / len(golds) if len(golds) > 0 else 0.0,
            precision=float(precision[i]),
            recall=float(recall[i]),
            f1=float(f1[i]),
            support=int(support[i]),
        )

    scored = list(scored_classes) if scored_classes is not None else list(classes)
    total_support = sum(per_class[str(c)].support for c in scored)
    if total_support == 0 and average != 'micro':
        precision = recall = f1 = 0.0
    else:
        precision, recall, f1, _ = _scores(preds, golds, scored, average)

    return Metrics(
        accuracy=_accuracy(preds, golds),
        precision=float(precision),
        recall=float(recall),
        f1=float(f1),
        support=total_support,
        per_class=per_class,
    )


def mean_metrics(items: List[Metrics]) -> Metrics:
    """Equal-weight average over folds; support is summed."""
    if not items:
        raise ValueError("cannot average an empty list of metrics")
    return Metrics(
        accuracy=float(np.mean([m.accuracy for m in items])),
        precision=float(np.mean([m.precision for m in items])),
        recall=float(np.mean([m.recall for m in items])),
        f1=float(np.mean([m.f1 for m in items])),
        support=int(sum(m.support for m in items)),
    )
