"""
Hypothesis Reader - Word Vectors
GloVe text-format loading and sentence embedding by averaging.
"""

import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, Iterator, List, Sequence, Tuple, Union

import numpy as np

from src.errors import DimensionMismatch, DuplicateToken, MalformedVector

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class WordVectorTable:
    """Immutable token -> vector table; row order follows the source file."""
    dim: int
    tokens: Tuple[str, ...]
    vectors: np.ndarray
    index: Dict[str, int] = field(repr=False, compare=False)

    @classmethod
    def from_pairs(cls, pairs: Sequence[Tuple[str, Sequence[float]]]) -> 'WordVectorTable':
        if not pairs:
            return cls(dim=0, tokens=(), vectors=np.zeros((0, 0)), index={})
        dim = len(pairs[0][1])
        index: Dict[str, int] = {}
        for row, (token, vector) in enumerate(pairs):
            if len(vector) != dim:
                raise DimensionMismatch(f"vector for '{token}' has {len(vector)} values, expected {dim}")
            if token in index:
                raise DuplicateToken(f"token '{token}' appears twice")
            index[token] = row
        vectors = np.asarray([v for _, v in pairs], dtype=np.float64)
        vectors.setflags(write=False)
        return cls(dim=dim, tokens=tuple(t for t, _ in pairs), vectors=vectors, index=index)

    def __len__(self) -> int:
        return len(self.tokens)

    def __contains__(self, token: str) -> bool:
        return token in self.index

    def __getitem__(self, token: str) -> np.ndarray:
        return self.vectors[self.index[token]]

    def index_of(self, token: str) -> int:
        """Row of ``token`` or -1 when unknown."""
        return self.index.get(token, -1)

    @property
    def entries(self) -> Dict[str, np.ndarray]:
        return {token: self.vectors[row] for token, row in self.index.items()}


def _parse_lines(lines: Iterator[str], source: str) -> List[Tuple[str, np.ndarray]]:
    pairs: List[Tuple[str, np.ndarray]] = []
    seen = set()
    dim = None
    for line_number, line in enumerate(lines, start=1):
        line = line.rstrip('\n').rstrip('\r')
        if not line.strip():
            continue
        parts = line.rstrip(' ').split(' ')
        token, fields = parts[0], parts[1:]
        if not fields:
            raise MalformedVector(f"{source}:{line_number}: no vector values for '{token}'")
        try:
            vector = np.asarray(fields, dtype=np.float64)
        except ValueError as e:
            raise MalformedVector(f"{source}:{line_number}: non-numeric field for '{token}'") from e

        if dim is None:
            dim = len(vector)
        elif len(vector) != dim:
            raise DimensionMismatch(f"{source}:{line_number}: '{token}' has {len(vector)} values, expected {dim}")
        if token in seen:
            raise DuplicateToken(f"{source}:{line_number}: duplicate token '{token}'")
        seen.add(token)
        pairs.append((token, vector))
    return pairs


def load_glove(path: Union[str, Path]) -> WordVectorTable:
    """Load ``token v1 ... vd`` lines; the dimension comes from the first entry."""
    with open(path, encoding='utf-8') as f:
        pairs = _parse_lines(iter(f), str(path))
    table = WordVectorTable.from_pairs(pairs)
    logger.info(f"Loaded {len(table)} word vectors of dimension {table.dim} from {path}")
    return table


def embed_sentence(table: WordVectorTable, tokens: Sequence[str]) -> np.ndarray:
    """
    Component-wise mean of token vectors. Unknown tokens contribute the zero
    vector but still count in the denominator.
    """
    if not tokens:
        logger.warning("Embedding an empty token list; returning the zero vector")
        return np.zeros(table.dim)

    rows = [table.index[t] for t in tokens if t in table.index]
    if not rows:
        logger.warning(f"All {len(tokens)} tokens are out of vocabulary; returning the zero vector")
        return np.zeros(table.dim)

    return table.vectors[rows].sum(axis=0) / len(tokens)
