"""
Hypothesis Reader - Token Normalization
Lowercasing, punctuation stripping and stop-word removal for feature extraction.
"""

import os
from dataclasses import dataclass
from functools import lru_cache
from typing import FrozenSet, List, Sequence

from src.ingest.segmenter import Sentence, strip_edge_punctuation, tokenize

STOPWORDS_FILE = os.path.join(os.path.dirname(os.path.abspath(__file__)), 'stopwords_en.txt')
STOPWORDS_VERSION = 'en-1'


@dataclass(frozen=True)
class NormalizeOptions:
    lowercase: bool = True
    strip_stopwords: bool = True
    strip_punct: bool = True


FEATURE_OPTIONS = NormalizeOptions()
TAGGER_OPTIONS = NormalizeOptions(lowercase=True, strip_stopwords=False, strip_punct=True)


@lru_cache(maxsize=None)
def load_stopwords(path: str = STOPWORDS_FILE) -> FrozenSet[str]:
    """One lowercase token per line; blank lines and '#' comments ignored."""
    with open(path, encoding='utf-8') as f:
        return frozenset(line.strip().lower() for line in f
                         if line.strip() and not line.startswith('#'))


def normalize_token_list(tokens: Sequence[str], opts: NormalizeOptions = FEATURE_OPTIONS) -> List[str]:
    stopwords = load_stopwords() if opts.strip_stopwords else frozenset()
    result = []
    for token in tokens:
        if opts.strip_punct:
            token = strip_edge_punctuation(token)
            if not token:
                continue
        if opts.lowercase:
            token = token.lower()
        if token.lower() in stopwords:
            continue
        result.append(token)
    return result


def normalize_tokens(sentence: Sentence, opts: NormalizeOptions = FEATURE_OPTIONS) -> List[str]:
    return normalize_token_list(sentence.tokens, opts)


def normalize_text(text: str, opts: NormalizeOptions = FEATURE_OPTIONS) -> List[str]:
    return normalize_token_list(tokenize(text), opts)
