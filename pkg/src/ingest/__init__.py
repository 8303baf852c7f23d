"""Document loading, sentence segmentation and hypothesis candidate extraction."""

from .documents import Document, list_document_paths, load_document
from .segmenter import Sentence, segment_sentences, surface_tokens, tokenize
from .candidates import (CandidateSentence, TriggerKind, censor_by_length, extract_candidates,
                         hypothesis_body, read_candidates_jsonl, write_candidates_jsonl)
from .normalize import FEATURE_OPTIONS, TAGGER_OPTIONS, NormalizeOptions, normalize_text, normalize_tokens
from .stats import CorpusStats, corpus_stats

__all__ = [
    "Document",
    "list_document_paths",
    "load_document",
    "Sentence",
    "segment_sentences",
    "surface_tokens",
    "tokenize",
    "CandidateSentence",
    "TriggerKind",
    "censor_by_length",
    "extract_candidates",
    "hypothesis_body",
    "read_candidates_jsonl",
    "write_candidates_jsonl",
    "FEATURE_OPTIONS",
    "TAGGER_OPTIONS",
    "NormalizeOptions",
    "normalize_text",
    "normalize_tokens",
    "CorpusStats",
    "corpus_stats",
]
