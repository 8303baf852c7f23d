"""
Hypothesis Reader - Stemming
Porter (1980) suffix stripping.
"""

from functools import lru_cache

from nltk.stem.porter import PorterStemmer

_stemmer = PorterStemmer(mode=PorterStemmer.ORIGINAL_ALGORITHM)


@lru_cache(maxsize=65536)
def porter_stem(token: str) -> str:
    # Tokens without letters (numbers, symbols) pass through
    if not any(ch.isalpha() for ch in token):
        return token
    return _stemmer.stem(token, to_lowercase=True)
