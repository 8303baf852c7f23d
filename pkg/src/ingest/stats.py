"""
Hypothesis Reader - Corpus Statistics
Word-count distribution of extracted candidates.
"""

from collections import Counter
from dataclasses import dataclass
from typing import Dict, Sequence

import numpy as np

from src.errors import EmptyCorpus
from src.ingest.candidates import CandidateSentence


@dataclass(frozen=True)
class CorpusStats:
    sentence_count: int
    mean_words: float
    sd_words: float
    histogram: Dict[int, int]


def stats_from_counts(counts: Sequence[int]) -> CorpusStats:
    if len(counts) == 0:
        raise EmptyCorpus("corpus statistics need at least one sentence")
    values = np.asarray(counts, dtype=float)
    histogram = dict(sorted(Counter(int(c) for c in counts).items()))
    return CorpusStats(
        sentence_count=len(counts),
        mean_words=float(values.mean()),
        sd_words=float(values.std(ddof=0)),
        histogram=histogram,
    )


def corpus_stats(candidates: Sequence[CandidateSentence]) -> CorpusStats:
    """Population mean and standard deviation of candidate word counts."""
    return stats_from_counts([c.word_count for c in candidates])
