"""
Hypothesis Reader - Sentence Segmentation
Splits document text into sentences and tokens.
"""

import re
from dataclasses import dataclass, field
from typing import List, Tuple

from src.ingest.documents import Document

# Terminal punctuation followed by whitespace and a capital letter or digit,
# optionally behind an opening quote or bracket.
BOUNDARY_RE = re.compile(r'[.!?]+(?=\s+[\"\'“‘(\[]?[A-Z0-9])')

# A sentence that so far consists only of a trigger label ("H1", "Hypothesis 2a").
LABEL_ONLY_RE = re.compile(r'^[\"\'“‘(\[]?(?:hypothesis|proposition|h|p)\s*[-:#]?\s*\d+[a-z]?$',
                           re.IGNORECASE)

ABBREVIATIONS = {
    'dr', 'mr', 'mrs', 'ms', 'prof', 'e.g', 'i.e', 'al', 'fig', 'figs', 'vs', 'cf',
    'eq', 'eqs', 'no', 'nos', 'inc', 'ltd', 'co', 'jr', 'sr', 'st', 'vol', 'pp', 'approx',
}

EDGE_PUNCT_RE = re.compile(r'^[\W_]+|[\W_]+$', re.UNICODE)
WHITESPACE_RE = re.compile(r'\s+')


@dataclass(frozen=True)
class Sentence:
    doc_id: str
    index: int
    text: str
    tokens: Tuple[str, ...] = field(default=())


def strip_edge_punctuation(token: str) -> str:
    return EDGE_PUNCT_RE.sub('', token)


def tokenize(text: str) -> List[str]:
    """Whitespace split, then strip leading/trailing punctuation; hyphenated words stay whole."""
    tokens = []
    for raw in text.split():
        token = strip_edge_punctuation(raw)
        if token:
            tokens.append(token)
    return tokens


def surface_tokens(text: str) -> List[str]:
    """Whitespace split with punctuation kept, for decoding spans back to text."""
    return text.split()


def make_sentence(doc_id: str, index: int, text: str) -> Sentence:
    text = WHITESPACE_RE.sub(' ', text).strip()
    return Sentence(doc_id=doc_id, index=index, text=text, tokens=tuple(tokenize(text)))


def _is_protected(chunk: str) -> bool:
    """True when the period closing ``chunk`` must not end a sentence."""
    stripped = chunk.strip()
    if LABEL_ONLY_RE.match(stripped):
        return True
    words = stripped.split()
    if not words:
        return True
    last = words[-1].lstrip('(["\'“').lower()
    if last in ABBREVIATIONS:
        return True
    if not (len(last) == 1 and last.isalpha() and words[-1][-1:].isupper()):
        return False
    # Initials ("J. Smith", "Smith, J. R.", "John F. Kennedy"); a capital after a
    # lowercase word ("type B.") is a label closing the sentence
    if len(words) == 1:
        return True
    previous = words[-2]
    return previous.endswith(',') or previous[:1].isupper()


def segment_sentences(doc: Document) -> List[Sentence]:
    text = doc.raw_text
    sentences: List[Sentence] = []
    start = 0

    for match in BOUNDARY_RE.finditer(text):
        chunk = text[start:match.start()]
        if _is_protected(chunk):
            continue
        piece = text[start:match.end()]
        if piece.strip():
            sentences.append(make_sentence(doc.doc_id, len(sentences), piece))
        start = match.end()

    tail = text[start:]
    if tail.strip():
        sentences.append(make_sentence(doc.doc_id, len(sentences), tail))

    return sentences
