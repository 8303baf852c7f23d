"""
Hypothesis Reader - Detector Evaluation
k-fold and hold-out cross-validation of the detector.
"""

import logging
from dataclasses import dataclass
from typing import Any, Dict, List, Optional, Sequence

from src.detector.config import DetectorConfig
from src.detector.model import LabeledSentence, predict, train_detector
from src.errors import FoldError
from src.evalkit.folds import FoldPlan, holdout_split, kfold
from src.evalkit.metrics import Metrics, binary_metrics, mean_metrics

logger = logging.getLogger(__name__)

PROTOCOLS = ('kfold', 'holdout')


@dataclass
class DetectorCVResult:
    protocol: str
    fold_metrics: List[Metrics]
    mean: Metrics
    pooled: Metrics

    def to_dict(self) -> Dict[str, Any]:
        return {
            'protocol': self.protocol,
            'folds': [m.to_dict() for m in self.fold_metrics],
            'mean': self.mean.to_dict(),
            'pooled': self.pooled.to_dict(),
        }


def evaluate_detector(model, corpus: Sequence[LabeledSentence], threshold: Optional[float] = None) -> Metrics:
    """Binary metrics with hypothesis (1) as the positive class."""
    if threshold is None:
        preds = [predict(model, example.tokens).label for example in corpus]
    else:
        preds = [int(model.hypothesis_prob(example.tokens) > threshold) for example in corpus]
    return binary_metrics(preds, [example.label for example in corpus])


def cross_validate_detector(corpus: Sequence[LabeledSentence], config: DetectorConfig, k: int = 10,
                            protocol: str = 'kfold', seed: Optional[int] = None,
                            train_fraction: float = 0.75) -> DetectorCVResult:
    """
    Train one model per split and test it on the held-out part.

    Args:
        corpus: labeled, normalized sentences
        config: detector hyper-parameters, reused for every split
        k: number of folds for the k-fold protocol
        protocol: 'kfold' or 'holdout' (a single ``train_fraction`` split)
        seed: split seed, defaults to ``config.seed``
    """
    if protocol not in PROTOCOLS:
        raise ValueError(f"protocol must be one of {PROTOCOLS}, got '{protocol}'")
    if k < 2:
        raise FoldError(f"k must be at least 2, got {k}")
    seed = config.seed if seed is None else seed

    if protocol == 'kfold':
        plan: FoldPlan = kfold(len(corpus), k, seed)
        splits = list(plan.splits())
    else:
        train_ids, test_ids = holdout_split(len(corpus), train_fraction, seed)
        splits = [(train_ids, test_ids)]

    fold_metrics: List[Metrics] = []
    all_preds: List[int] = []
    all_golds: List[int] = []
    for fold, (train_ids, test_ids) in enumerate(splits):
        model = train_detector([corpus[i] for i in train_ids], config)
        test = [corpus[i] for i in test_ids]
        preds = [predict(model, example.tokens).label for example in test]
        golds = [example.label for example in test]
        fold_metrics.append(binary_metrics(preds, golds))
        all_preds.extend(preds)
        all_golds.extend(golds)
        logger.info(f"Fold {fold + 1}/{len(splits)}: F1 {fold_metrics[-1].f1:.3f}")

    return DetectorCVResult(
        protocol=protocol,
        fold_metrics=fold_metrics,
        mean=mean_metrics(fold_metrics),
        pooled=binary_metrics(all_preds, all_golds),
    )
