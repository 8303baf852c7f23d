"""Word vectors, n-gram vocabularies, bag-of-n-grams features and stemming."""

from .glove import WordVectorTable, embed_sentence, load_glove
from .stemming import porter_stem
from .vocabulary import BowVector, Normalization, Vocabulary, bow_vector, build_vocabulary, ngrams

__all__ = [
    "WordVectorTable",
    "embed_sentence",
    "load_glove",
    "porter_stem",
    "BowVector",
    "Normalization",
    "Vocabulary",
    "bow_vector",
    "build_vocabulary",
    "ngrams",
]
