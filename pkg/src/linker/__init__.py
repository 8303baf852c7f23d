"""Causality and direction classification of hypothesis links."""

from .config import LinkerConfig
from .logreg import LinkTask, LogisticModel, logistic_objective, train_logreg
from .model import (CAUSAL_CLASSES, DIRECTIONS, LinkExample, LinkLabel, LinkModel, feature_matrix, featurize,
                    link_tokens, link_vocabulary, load_link_model, predict_link, read_linker_jsonl, save_link_model,
                    train_link_model)
from .tuning import GridPoint, TuneResult, tune, tune_and_train

__all__ = [
    "LinkerConfig",
    "LinkTask",
    "LogisticModel",
    "logistic_objective",
    "train_logreg",
    "CAUSAL_CLASSES",
    "DIRECTIONS",
    "LinkExample",
    "LinkLabel",
    "LinkModel",
    "feature_matrix",
    "featurize",
    "link_tokens",
    "link_vocabulary",
    "load_link_model",
    "predict_link",
    "read_linker_jsonl",
    "save_link_model",
    "train_link_model",
    "GridPoint",
    "TuneResult",
    "tune",
    "tune_and_train",
]
