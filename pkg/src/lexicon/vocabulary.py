"""
Hypothesis Reader - N-gram Vocabulary
Uni/bi/tri-gram vocabularies and bag-of-n-grams vectors.
"""

import json
import logging
from collections import Counter
from dataclasses import dataclass
from enum import Enum
from typing import Dict, Iterator, List, Optional, Sequence, Tuple

import numpy as np

from src.errors import EmptyCorpus
from src.lexicon.stemming import porter_stem

logger = logging.getLogger(__name__)


class Normalization(str, Enum):
    NONE = 'none'
    STEM = 'stem'


@dataclass(frozen=True)
class VocabEntry:
    id: int
    doc_freq: int
    corpus_freq: int


@dataclass(frozen=True)
class Vocabulary:
    max_n: int
    normalization: Normalization
    entries: Dict[str, VocabEntry]

    def __len__(self) -> int:
        return len(self.entries)

    def __contains__(self, ngram: str) -> bool:
        return ngram in self.entries

    def id_of(self, ngram: str) -> Optional[int]:
        entry = self.entries.get(ngram)
        return entry.id if entry is not None else None

    def ngrams_by_id(self) -> List[str]:
        return sorted(self.entries, key=lambda g: self.entries[g].id)

    def prepare(self, tokens: Sequence[str]) -> List[str]:
        """Apply this vocabulary's normalization to raw tokens."""
        if self.normalization == Normalization.STEM:
            return [porter_stem(t) for t in tokens]
        return list(tokens)

    def to_json(self) -> str:
        payload = {
            'max_n': self.max_n,
            'normalization': self.normalization.value,
            'entries': [
                {'ngram': g, 'id': self.entries[g].id, 'corpus_freq': self.entries[g].corpus_freq,
                 'doc_freq': self.entries[g].doc_freq}
                for g in self.ngrams_by_id()
            ],
        }
        return json.dumps(payload, ensure_ascii=False, sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> 'Vocabulary':
        payload = json.loads(text)
        entries = {
            e['ngram']: VocabEntry(id=int(e['id']), doc_freq=int(e.get('doc_freq', 0)),
                                   corpus_freq=int(e['corpus_freq']))
            for e in payload['entries']
        }
        return cls(max_n=int(payload['max_n']), normalization=Normalization(payload['normalization']),
                   entries=entries)


@dataclass(frozen=True)
class BowVector:
    counts: Dict[int, int]
    weights: Optional[Dict[int, float]] = None

    def to_dense(self, size: int, use_weights: bool = True) -> np.ndarray:
        dense = np.zeros(size)
        source = self.weights if (use_weights and self.weights is not None) else self.counts
        for feature_id, value in source.items():
            dense[feature_id] = value
        return dense


def ngrams(tokens: Sequence[str], max_n: int) -> Iterator[str]:
    """Every contiguous n-gram with 1 <= n <= max_n, space-joined."""
    for n in range(1, max_n + 1):
        for i in range(len(tokens) - n + 1):
            yield ' '.join(tokens[i:i + n])


def build_vocabulary(corpus: Sequence[Sequence[str]], max_n: int = 3, min_count: int = 1,
                     normalization: Normalization = Normalization.NONE) -> Vocabulary:
    """N-grams seen at least ``min_count`` times; ids follow lexicographic order."""
    if not corpus:
        raise EmptyCorpus("cannot build a vocabulary from an empty corpus")
    if max_n not in (1, 2, 3):
        raise ValueError(f"max_n must be 1, 2 or 3, got {max_n}")
    normalization = Normalization(normalization)

    corpus_freq: Counter = Counter()
    doc_freq: Counter = Counter()
    for tokens in corpus:
        if normalization == Normalization.STEM:
            tokens = [porter_stem(t) for t in tokens]
        grams = list(ngrams(tokens, max_n))
        corpus_freq.update(grams)
        doc_freq.update(set(grams))

    kept = sorted(g for g, c in corpus_freq.items() if c >= min_count)
    entries = {g: VocabEntry(id=i, doc_freq=doc_freq[g], corpus_freq=corpus_freq[g]) for i, g in enumerate(kept)}
    logger.debug(f"Built vocabulary of {len(entries)} n-grams (max_n={max_n}, min_count={min_count})")
    return Vocabulary(max_n=max_n, normalization=normalization, entries=entries)


def bow_vector(vocab: Vocabulary, tokens: Sequence[str], normalize: bool = False) -> BowVector:
    """Counts of in-vocabulary n-grams; optional unit-L2 weights."""
    counts: Counter = Counter()
    for gram in ngrams(vocab.prepare(tokens), vocab.max_n):
        feature_id = vocab.id_of(gram)
        if feature_id is not None:
            counts[feature_id] += 1

    ordered = dict(sorted(counts.items()))
    weights = None
    if normalize:
        norm = float(np.sqrt(sum(c * c for c in ordered.values())))
        weights = {i: c / norm for i, c in ordered.items()} if norm > 0 else {}
    return BowVector(counts=ordered, weights=weights)
