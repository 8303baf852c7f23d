"""Shared metrics and cross-validation machinery."""

from .metrics import (ConfusionCounts, Metrics, binary_metrics, confusion_counts, f1_score,
                      mean_metrics, multiclass_metrics)
from .folds import FoldPlan, holdout_split, kfold, make_rng, repeat_seeds, stratified_kfold

__all__ = [
    "ConfusionCounts",
    "Metrics",
    "binary_metrics",
    "confusion_counts",
    "f1_score",
    "mean_metrics",
    "multiclass_metrics",
    "FoldPlan",
    "holdout_split",
    "kfold",
    "make_rng",
    "repeat_seeds",
    "stratified_kfold",
]
