"""Sentence-level hypothesis detection."""

from .config import DetectorConfig, LossMode, parametrization
from .model import (DetectorModel, LabeledSentence, Prediction, load_detector, predict, save_detector,
                    train_detector)
from .evaluation import DetectorCVResult, cross_validate_detector, evaluate_detector
from .data import join_candidates_with_labels, read_labeled_jsonl

__all__ = [
    "DetectorConfig",
    "LossMode",
    "parametrization",
    "DetectorModel",
    "LabeledSentence",
    "Prediction",
    "load_detector",
    "predict",
    "save_detector",
    "train_detector",
    "DetectorCVResult",
    "cross_validate_detector",
    "evaluate_detector",
    "join_candidates_with_labels",
    "read_labeled_jsonl",
]
