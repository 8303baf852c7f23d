"""
Hypothesis Reader - Link Classifier
Bag-of-n-grams features and the causality and direction classifiers that
label each hypothesis link.
"""

import json
import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple, Union

import numpy as np
from scipy import sparse

from src.errors import DataFormatError, EmptyCorpus, ModelFormatError
from src.ingest.candidates import hypothesis_body
from src.ingest.normalize import normalize_text
from src.lexicon.vocabulary import Normalization, Vocabulary, bow_vector, build_vocabulary
from src.linker.config import LinkerConfig
from src.linker.logreg import LinkTask, LogisticModel, train_logreg
from src.serialization import read_container, write_container

logger = logging.getLogger(__name__)

MAGIC = b'HYPOLINKER'
CAUSAL_CLASSES = (0, 1)
DIRECTIONS = ('pos', 'neg', 'non_lin')


@dataclass(frozen=True)
class LinkExample:
    text: str
    causal: int
    direction: str


@dataclass(frozen=True)
class LinkLabel:
    causal: int
    direction: str
    causal_prob: float
    direction_probs: Tuple[float, ...]


@dataclass(eq=False)
class LinkModel:
    config: LinkerConfig
    vocab: Vocabulary
    causality: LogisticModel
    direction: LogisticModel

    def predict(self, text: str) -> LinkLabel:
        return predict_link(self, link_tokens(text))

    def save(self, path: Union[str, Path]) -> None:
        save_link_model(self, path)


def link_tokens(text: str) -> List[str]:
    """Hypothesis text without its label, lowercased and stop-word filtered."""
    return normalize_text(hypothesis_body(text))


def featurize(vocab: Vocabulary, tokens: Sequence[str]) -> np.ndarray:
    """Dense unit-L2 bag-of-n-grams vector; the zero vector when nothing is known."""
    bow = bow_vector(vocab, tokens, normalize=True)
    return bow.to_dense(len(vocab))


def feature_matrix(vocab: Vocabulary, token_lists: Sequence[Sequence[str]]) -> sparse.csr_matrix:
    rows, cols, values = [], [], []
    for row, tokens in enumerate(token_lists):
        bow = bow_vector(vocab, tokens, normalize=True)
        for feature_id, weight in bow.weights.items():
            rows.append(row)
            cols.append(feature_id)
            values.append(weight)
    return sparse.csr_matrix((values, (rows, cols)), shape=(len(token_lists), len(vocab)), dtype=np.float64)


def link_vocabulary(token_lists: Sequence[Sequence[str]], config: LinkerConfig) -> Vocabulary:
    return build_vocabulary(token_lists, max_n=config.max_n, min_count=config.min_count,
                            normalization=Normalization.STEM)


def predict_link(model: LinkModel, tokens: Sequence[str]) -> LinkLabel:
    """Causal when its probability exceeds 0.5; direction by argmax in pos, neg, non_lin order."""
    X = featurize(model.vocab, tokens)[None, :]
    causal_probs = model.causality.predict_proba(X)[0]
    direction_probs = model.direction.predict_proba(X)[0]
    return LinkLabel(
        causal=int(model.causality.predict(X)[0]),
        direction=str(model.direction.predict(X)[0]),
        causal_prob=float(causal_probs[1]),
        direction_probs=tuple(float(p) for p in direction_probs),
    )


def train_link_model(corpus: Sequence[LinkExample], config: LinkerConfig,
                     reg_strengths: Optional[Dict[LinkTask, float]] = None) -> LinkModel:
    """
    Build the stemmed n-gram vocabulary on the whole corpus and fit both
    classifiers. Without ``reg_strengths`` both use ``config.reg_strength``.
    """
    if not corpus:
        raise EmptyCorpus("cannot train the linker on an empty corpus")
    reg_strengths = reg_strengths or {}

    token_lists = [link_tokens(example.text) for example in corpus]
    vocab = link_vocabulary(token_lists, config)
    X = feature_matrix(vocab, token_lists)
    logger.info(f"Training linker on {len(corpus)} hypotheses with {len(vocab)} n-gram features")

    causality = train_logreg(X, [e.causal for e in corpus], CAUSAL_CLASSES, LinkTask.CAUSALITY,
                             reg_strengths.get(LinkTask.CAUSALITY, config.reg_strength), config.max_iter)
    direction = train_logreg(X, [e.direction for e in corpus], DIRECTIONS, LinkTask.DIRECTION,
                             reg_strengths.get(LinkTask.DIRECTION, config.reg_strength), config.max_iter)
    return LinkModel(config=config, vocab=vocab, causality=causality, direction=direction)


def read_linker_jsonl(path: Union[str, Path]) -> List[LinkExample]:
    """One {"text", "causal", "direction"} object per line."""
    corpus = []
    with open(path, encoding='utf-8') as f:
        for line_number, line in enumerate(f, start=1):
            if not line.strip():
                continue
            try:
                record = json.loads(line)
                example = LinkExample(text=str(record['text']), causal=record['causal'],
                                      direction=record['direction'])
            except (json.JSONDecodeError, KeyError, TypeError) as e:
                raise DataFormatError(str(path), line_number, f"bad linker record: {e}") from e
            if isinstance(example.causal, bool) or example.causal not in CAUSAL_CLASSES:
                raise DataFormatError(str(path), line_number, f"causal must be 0 or 1, got {example.causal!r}")
            if example.direction not in DIRECTIONS:
                raise DataFormatError(str(path), line_number,
                                      f"direction must be one of {DIRECTIONS}, got {example.direction!r}")
            corpus.append(example)
    logger.info(f"Read {len(corpus)} linker examples from {path}")
    return corpus


# ---------------------------------------------------------------- persistence

def _task_header(model: LogisticModel) -> Dict:
    return {'classes': list(model.classes), 'reg_strength': model.reg_strength}


def save_link_model(model: LinkModel, path: Union[str, Path]) -> None:
    header = {
        'kind': 'linker',
        'config': model.config.model_dump(mode='json'),
        'vocab': json.loads(model.vocab.to_json()),
        'causality': _task_header(model.causality),
        'direction': _task_header(model.direction),
    }
    write_container(path, MAGIC, header, [
        ('causality.weights', model.causality.weights),
        ('causality.bias', model.causality.bias),
        ('direction.weights', model.direction.weights),
        ('direction.bias', model.direction.bias),
    ])
    logger.info(f"Saved linker to {path}")


def load_link_model(path: Union[str, Path]) -> LinkModel:
    header, tensors = read_container(path, MAGIC)
    try:
        vocab = Vocabulary.from_json(json.dumps(header['vocab']))
        tasks = {}
        for task in LinkTask:
            meta = header[task.value]
            tasks[task] = LogisticModel(
                task=task,
                classes=tuple(meta['classes']),
                weights=tensors[f'{task.value}.weights'],
                bias=tensors[f'{task.value}.bias'],
                reg_strength=float(meta['reg_strength']),
            )
        model = LinkModel(config=LinkerConfig(**header['config']), vocab=vocab,
                          causality=tasks[LinkTask.CAUSALITY], direction=tasks[LinkTask.DIRECTION])
    except (KeyError, TypeError, ValueError) as e:
        raise ModelFormatError(f"{path} does not hold a linker: {e}") from e

    for task_model in (model.causality, model.direction):
        if task_model.weights.shape[1] != len(vocab):
            raise ModelFormatError(f"{path}: {task_model.task.value} weights do not match the vocabulary")
    return model
