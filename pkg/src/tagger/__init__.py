"""Cause/outcome node tagging of hypothesis tokens."""

from .config import TaggerConfig
from .data import (RelationSpans, TagSequence, align_spans, decode_spans, lookup_key, pad_or_truncate,
                   read_tagger_jsonl)
from .model import (EpochRecord, TaggerModel, evaluate_tagger, load_tagger, per_class_metrics, save_tagger,
                    tag, tag_many, train_tagger, write_epoch_log)

__all__ = [
    "TaggerConfig",
    "RelationSpans",
    "TagSequence",
    "align_spans",
    "decode_spans",
    "lookup_key",
    "pad_or_truncate",
    "read_tagger_jsonl",
    "EpochRecord",
    "TaggerModel",
    "evaluate_tagger",
    "load_tagger",
    "per_class_metrics",
    "save_tagger",
    "tag",
    "tag_many",
    "train_tagger",
    "write_epoch_log",
]
