"""
Hypothesis Reader - Tagger Data
Tag sequences, span alignment and decoding, and index encoding against the
word-vector table.
"""

import json
import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple, Union

import numpy as np

from src.errors import DataFormatError, InvalidTag, MisalignedInput
from src.ingest.segmenter import strip_edge_punctuation
from src.lexicon.glove import WordVectorTable

logger = logging.getLogger(__name__)

NON_NODE, CAUSE, OUTCOME = 0, 1, 2
TAG_CLASSES = (NON_NODE, CAUSE, OUTCOME)
PAD_INDEX = 0
OOV_INDEX = 1
RESERVED_ROWS = 2


@dataclass(frozen=True)
class TagSequence:
    tokens: Tuple[str, ...]
    tags: Tuple[int, ...]

    def __post_init__(self):
        if len(self.tokens) != len(self.tags):
            raise MisalignedInput(f"{len(self.tokens)} tokens but {len(self.tags)} tags")
        for tag in self.tags:
            if tag not in TAG_CLASSES:
                raise InvalidTag(f"tag {tag!r} is not one of {TAG_CLASSES}")


@dataclass(frozen=True)
class RelationSpans:
    variable_1: str
    variable_2: str

    @property
    def complete(self) -> bool:
        return bool(self.variable_1) and bool(self.variable_2)


def lookup_key(token: str) -> str:
    """Embedding lookup form of a surface token."""
    return strip_edge_punctuation(token.lower())


def decode_spans(sequence: TagSequence) -> RelationSpans:
    """
    Join the tokens of each node class in sentence order. Runs that are not
    contiguous are concatenated; punctuation at the edges of a span is dropped.
    """
    def join(cls: int) -> str:
        span = ' '.join(t for t, tag in zip(sequence.tokens, sequence.tags) if tag == cls)
        return strip_edge_punctuation(span) if span else ''

    return RelationSpans(variable_1=join(CAUSE), variable_2=join(OUTCOME))


def _find(keys: Sequence[str], span: Sequence[str], taken: Sequence[bool]) -> Optional[int]:
    n = len(span)
    for start in range(len(keys) - n + 1):
        if list(keys[start:start + n]) == list(span) and not any(taken[start:start + n]):
            return start
    return None


def align_spans(tokens: Sequence[str], variable_1: str, variable_2: str) -> TagSequence:
    """Tag the first contiguous, punctuation-insensitive match of each variable."""
    keys = [lookup_key(t) for t in tokens]
    tags = [NON_NODE] * len(tokens)
    taken = [False] * len(tokens)
    for cls, variable in ((CAUSE, variable_1), (OUTCOME, variable_2)):
        span = [k for k in (lookup_key(t) for t in variable.split()) if k]
        if not span:
            continue
        start = _find(keys, span, taken)
        if start is None:
            raise MisalignedInput(f"'{variable}' does not occur in the sentence")
        for i in range(start, start + len(span)):
            tags[i] = cls
            taken[i] = True
    return TagSequence(tokens=tuple(tokens), tags=tuple(tags))


def read_tagger_jsonl(path: Union[str, Path]) -> List[TagSequence]:
    """
    Records are either {"tokens", "tags"} or annotation rows
    {"text", "variable_1", "variable_2"} aligned with :func:`align_spans`.
    """
    sequences = []
    with open(path, encoding='utf-8') as f:
        for line_number, line in enumerate(f, start=1):
            if not line.strip():
                continue
            try:
                record = json.loads(line)
                if 'tokens' in record:
                    sequences.append(TagSequence(tokens=tuple(record['tokens']),
                                                 tags=tuple(int(t) for t in record['tags'])))
                else:
                    sequences.append(align_spans(record['text'].split(), record['variable_1'],
                                                 record['variable_2']))
            except (json.JSONDecodeError, KeyError, TypeError, ValueError, InvalidTag, MisalignedInput) as e:
                raise DataFormatError(str(path), line_number, f"bad tagger record: {e}") from e
    logger.info(f"Read {len(sequences)} tag sequences from {path}")
    return sequences


class EmbeddingIndex:
    """Token -> embedding row: 0 is PAD, 1 is OOV, then the vector table in file order."""

    def __init__(self, tokens: Sequence[str], vectors: np.ndarray):
        self.tokens = tuple(tokens)
        self.rows: Dict[str, int] = {t: RESERVED_ROWS + i for i, t in enumerate(self.tokens)}
        dim = vectors.shape[1] if vectors.ndim == 2 else 0
        self.matrix = np.zeros((RESERVED_ROWS + len(self.tokens), dim), dtype=np.float64)
        if len(self.tokens):
            self.matrix[RESERVED_ROWS:] = vectors

    @classmethod
    def from_table(cls, table: WordVectorTable) -> 'EmbeddingIndex':
        return cls(table.tokens, table.vectors)

    @property
    def dim(self) -> int:
        return self.matrix.shape[1]

    def row(self, token: str) -> int:
        return self.rows.get(lookup_key(token), OOV_INDEX)

    def encode(self, tokens: Sequence[str], pad_len: int) -> np.ndarray:
        return pad_or_truncate([self.row(t) for t in tokens], pad_len)


def pad_or_truncate(indices: Sequence[int], pad_len: int = 50, pad_value: int = PAD_INDEX) -> np.ndarray:
    """Right-pad with ``pad_value`` or keep the first ``pad_len`` entries."""
    if pad_len < 1:
        raise ValueError(f"pad_len must be >= 1, got {pad_len}")
    out = np.full(pad_len, pad_value, dtype=np.int64)
    kept = list(indices)[:pad_len]
    out[:len(kept)] = kept
    return out
