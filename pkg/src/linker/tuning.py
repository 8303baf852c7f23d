"""
Hypothesis Reader - Linker Tuning
Repeated stratified k-fold search over the regularization strength.
"""

import logging
from collections import Counter
from dataclasses import dataclass
from typing import Any, Dict, Hashable, List, Optional, Sequence, Tuple

import numpy as np

from src.errors import FoldError
from src.evalkit.folds import repeat_seeds, stratified_kfold
from src.evalkit.metrics import Metrics, binary_metrics, mean_metrics, multiclass_metrics
from src.linker.config import LinkerConfig
from src.linker.logreg import LinkTask, Matrix, train_logreg
from src.linker.model import (CAUSAL_CLASSES, DIRECTIONS, LinkExample, LinkModel, feature_matrix, link_tokens,
                              link_vocabulary, train_link_model)

logger = logging.getLogger(__name__)


@dataclass
class GridPoint:
    reg_strength: float
    metrics: Metrics
    weighted_f1: Optional[float] = None


@dataclass
class TuneResult:
    task: LinkTask
    points: List[GridPoint]
    best: GridPoint

    def to_dict(self) -> Dict[str, Any]:
        return {
            'task': self.task.value,
            'grid': [{'reg_strength': p.reg_strength, 'metrics': p.metrics.to_dict(),
                      'weighted_f1': p.weighted_f1} for p in self.points],
            'best': {'reg_strength': self.best.reg_strength, 'metrics': self.best.metrics.to_dict()},
        }


def score_task(preds: Sequence[Hashable], golds: Sequence[Hashable], classes: Sequence[Hashable],
               task: LinkTask) -> Metrics:
    """Binary F-1 on the causal class, macro F-1 over the three directions."""
    if task == LinkTask.CAUSALITY:
        return binary_metrics(preds, golds, positive_class=classes[1])
    return multiclass_metrics(preds, golds, classes, average='macro')


def tune(X: Matrix, y: Sequence[Hashable], classes: Sequence[Hashable], task: LinkTask,
         grid: Sequence[float], k: int = 10, repeats: int = 3, seed: int = 0,
         max_iter: int = 2000) -> TuneResult:
    """
    Mean F-1 of every grid point over ``repeats`` stratified ``k``-fold plans.
    The best point has the highest F-1; ties go to the stronger penalty.
    """
    if not grid:
        raise ValueError("grid must not be empty")
    counts = Counter(y)
    small = {str(c): n for c, n in counts.items() if n < k}
    if small:
        raise FoldError(f"classes {small} have fewer than k={k} members")

    y = list(y)
    plans = [stratified_kfold(y, k, s) for s in repeat_seeds(seed, repeats)]
    points: List[GridPoint] = []
    for reg in grid:
        fold_metrics: List[Metrics] = []
        weighted: List[float] = []
        for plan in plans:
            for train_ids, test_ids in plan.splits():
                model = train_logreg(X[train_ids], [y[i] for i in train_ids], classes, task, reg, max_iter)
                preds = model.predict(X[test_ids])
                golds = [y[i] for i in test_ids]
                fold_metrics.append(score_task(preds, golds, classes, task))
                if task == LinkTask.DIRECTION:
                    weighted.append(multiclass_metrics(preds, golds, classes, average='weighted').f1)
        point = GridPoint(reg_strength=float(reg), metrics=mean_metrics(fold_metrics),
                          weighted_f1=float(np.mean(weighted)) if weighted else None)
        points.append(point)
        logger.info(f"{task.value} reg_strength={reg}: mean F1 {point.metrics.f1:.4f}")

    best = points[0]
    for point in points[1:]:
        if point.metrics.f1 > best.metrics.f1 or (
                point.metrics.f1 == best.metrics.f1 and point.reg_strength > best.reg_strength):
            best = point
    return TuneResult(task=task, points=points, best=best)


def tune_and_train(corpus: Sequence[LinkExample],
                   config: LinkerConfig) -> Tuple[LinkModel, Dict[LinkTask, TuneResult]]:
    """
    Tune each classifier's penalty on the full-corpus features (when
    ``config.tune``), then fit the final link model with the chosen values.

    Returns the model and the tuning result per task (empty without tuning).
    """
    results: Dict[LinkTask, TuneResult] = {}
    if config.tune:
        token_lists = [link_tokens(example.text) for example in corpus]
        X = feature_matrix(link_vocabulary(token_lists, config), token_lists)
        for task, labels, classes in (
                (LinkTask.CAUSALITY, [e.causal for e in corpus], CAUSAL_CLASSES),
                (LinkTask.DIRECTION, [e.direction for e in corpus], DIRECTIONS)):
            results[task] = tune(X, labels, classes, task, config.grid, config.folds, config.repeats,
                                 config.seed, config.max_iter)
    reg_strengths = {task: result.best.reg_strength for task, result in results.items()}
    return train_link_model(corpus, config, reg_strengths), results
