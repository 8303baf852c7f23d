"""
Hypothesis Reader - Sentence Detector
fastText-style classifier: a sentence is the mean of its word and hashed
word n-gram embeddings, followed by a linear two-label output head.
"""

import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple, Union

import numpy as np
from scipy.special import expit, softmax

from src.detector.config import DetectorConfig, LossMode
from src.errors import EmptyCorpus, ModelFormatError, SingleClass
from src.evalkit.folds import make_rng
from src.serialization import read_container, write_container

logger = logging.getLogger(__name__)

MAGIC = b'HYPODETECT'
LABELS = (0, 1)

FNV_OFFSET = 2166136261
FNV_PRIME = 16777619


def fnv1a_32(text: str) -> int:
    """32-bit FNV-1a hash of the UTF-8 bytes of ``text``."""
    h = FNV_OFFSET
    for byte in text.encode('utf-8'):
        h ^= byte
        h = (h * FNV_PRIME) & 0xFFFFFFFF
    return h


def hashed_ngrams(tokens: Sequence[str], ngram: int, bucket_count: int) -> List[int]:
    """Bucket ids of every word n-gram with 2 <= n <= ``ngram``."""
    buckets = []
    for n in range(2, ngram + 1):
        for i in range(len(tokens) - n + 1):
            buckets.append(fnv1a_32(' '.join(tokens[i:i + n])) % bucket_count)
    return buckets


@dataclass(frozen=True)
class LabeledSentence:
    tokens: Tuple[str, ...]
    label: int


@dataclass(frozen=True)
class Prediction:
    label: int
    prob: float


@dataclass(eq=False)
class DetectorModel:
    config: DetectorConfig
    vocab: Dict[str, int]
    buckets: Dict[int, int]
    input_embeddings: np.ndarray
    output_weights: np.ndarray
    loss_history: List[float] = field(default_factory=list)

    def feature_rows(self, tokens: Sequence[str]) -> List[int]:
        """Embedding rows of the known uni-grams and seen n-gram buckets of ``tokens``."""
        return feature_rows(self.vocab, self.buckets, tokens, self.config)

    def scores(self, tokens: Sequence[str]) -> Optional[np.ndarray]:
        rows = self.feature_rows(tokens)
        if not rows:
            return None
        hidden = self.input_embeddings[rows].astype(np.float64).mean(axis=0)
        return self.output_weights.astype(np.float64) @ hidden

    def predict(self, tokens: Sequence[str]) -> Prediction:
        return predict(self, tokens)

    def hypothesis_prob(self, tokens: Sequence[str]) -> float:
        """Probability of label 1; 0.5 when no token is known."""
        scores = self.scores(tokens)
        if scores is None:
            return 0.5
        return float(softmax(scores)[1])

    def save(self, path: Union[str, Path]) -> None:
        save_detector(self, path)


def feature_rows(vocab: Dict[str, int], buckets: Dict[int, int], tokens: Sequence[str],
                 config: DetectorConfig) -> List[int]:
    rows = [vocab[t] for t in tokens if t in vocab]
    if config.ngram > 1:
        for bucket in hashed_ngrams(tokens, config.ngram, config.bucket_count):
            row = buckets.get(bucket)
            if row is not None:
                rows.append(row)
    return rows


# ---------------------------------------------------------------- losses

def softmax_loss(inputs: np.ndarray, output: np.ndarray, rows: Sequence[int],
                 label: int) -> Tuple[float, np.ndarray, np.ndarray]:
    """
    Cross-entropy of one sentence.

    Returns (loss, grad_hidden, grad_output). Every occurrence of a row in
    ``rows`` receives ``grad_hidden / len(rows)``.
    """
    hidden = inputs[rows].mean(axis=0)
    probs = softmax(output @ hidden)
    loss = -float(np.log(max(probs[label], 1e-300)))
    g = probs.copy()
    g[label] -= 1.0
    return loss, output.T @ g, np.outer(g, hidden)


def negative_sampling_loss(inputs: np.ndarray, output: np.ndarray, rows: Sequence[int], label: int,
                           negatives: Sequence[int]) -> Tuple[float, np.ndarray, np.ndarray]:
    """Binary logistic loss on the target label plus each sampled negative."""
    hidden = inputs[rows].mean(axis=0)
    grad_output = np.zeros_like(output)
    grad_hidden = np.zeros_like(hidden)
    loss = 0.0
    for target, is_positive in [(label, True)] + [(n, False) for n in negatives]:
        score = float(expit(output[target] @ hidden))
        if is_positive:
            loss -= np.log(max(score, 1e-300))
            coeff = score - 1.0
        else:
            loss -= np.log(max(1.0 - score, 1e-300))
            coeff = score
        grad_output[target] += coeff * hidden
        grad_hidden += coeff * output[target]
    return float(loss), grad_hidden, grad_output


def _negative_table(labels: Sequence[int]) -> np.ndarray:
    counts = np.bincount(np.asarray(labels), minlength=len(LABELS)).astype(np.float64)
    weights = np.sqrt(counts)
    return weights / weights.sum()


def _draw_negatives(rng: np.random.Generator, table: np.ndarray, label: int, count: int) -> List[int]:
    negatives = []
    while len(negatives) < count:
        candidate = int(rng.choice(len(LABELS), p=table))
        if candidate != label:
            negatives.append(candidate)
    return negatives


# ---------------------------------------------------------------- training

def _build_index(corpus: Sequence[LabeledSentence], config: DetectorConfig) -> Tuple[Dict[str, int], Dict[int, int]]:
    tokens = sorted({t for example in corpus for t in example.tokens})
    vocab = {t: i for i, t in enumerate(tokens)}
    seen = set()
    if config.ngram > 1:
        for example in corpus:
            seen.update(hashed_ngrams(example.tokens, config.ngram, config.bucket_count))
    buckets = {b: len(vocab) + i for i, b in enumerate(sorted(seen))}
    return vocab, buckets


def train_detector(corpus: Sequence[LabeledSentence], config: DetectorConfig) -> DetectorModel:
    """
    Train by per-sentence SGD with a linearly decaying learning rate.

    Args:
        corpus: normalized token tuples with labels 0/1
        config: detector hyper-parameters; ``config.seed`` fixes initialization,
            shuffling and negative draws
    """
    if not corpus:
        raise EmptyCorpus("cannot train the detector on an empty corpus")
    labels = sorted({example.label for example in corpus})
    if any(label not in LABELS for label in labels):
        raise ValueError(f"detector labels must be 0 or 1, got {labels}")
    if len(labels) < 2:
        raise SingleClass(f"detector corpus contains only label {labels[0]}")

    rng = make_rng(config.seed)
    vocab, buckets = _build_index(corpus, config)
    n_rows = len(vocab) + len(buckets)
    inputs = rng.uniform(-1.0 / config.dim, 1.0 / config.dim, size=(n_rows, config.dim))
    output = np.zeros((len(LABELS), config.dim))

    examples = []
    for example in corpus:
        rows = feature_rows(vocab, buckets, example.tokens, config)
        if rows:
            examples.append((np.asarray(rows, dtype=np.int64), example.label))
    skipped = len(corpus) - len(examples)
    if skipped:
        logger.warning(f"Skipping {skipped} training sentences with no tokens")
    if not examples:
        raise EmptyCorpus("every training sentence is empty")

    table = _negative_table([label for _, label in examples])
    total_updates = config.epochs * len(examples)
    processed = 0
    loss_history: List[float] = []

    logger.info(f"Training detector: {len(examples)} sentences, {n_rows} embedding rows, "
                f"ngram={config.ngram}, lr={config.lr}, loss={config.loss.value}")

    for epoch in range(config.epochs):
        epoch_loss = 0.0
        for position in rng.permutation(len(examples)):
            rows, label = examples[position]
            lr = config.lr * (1.0 - processed / total_updates)
            if config.loss == LossMode.SOFTMAX:
                loss, grad_hidden, grad_output = softmax_loss(inputs, output, rows, label)
            else:
                negatives = _draw_negatives(rng, table, label, config.neg_samples)
                loss, grad_hidden, grad_output = negative_sampling_loss(inputs, output, rows, label, negatives)
            output -= lr * grad_output
            np.add.at(inputs, rows, -lr * grad_hidden / len(rows))
            epoch_loss += loss
            processed += 1
        loss_history.append(epoch_loss / len(examples))
        logger.debug(f"Epoch {epoch + 1}/{config.epochs}: mean loss {loss_history[-1]:.6f}")

    return DetectorModel(
        config=config,
        vocab=vocab,
        buckets=buckets,
        input_embeddings=inputs.astype(np.float32),
        output_weights=output.astype(np.float32),
        loss_history=loss_history,
    )


def predict(model: DetectorModel, tokens: Sequence[str]) -> Prediction:
    """Softmax over the two output scores; ties go to label 0."""
    scores = model.scores(tokens)
    if scores is None:
        logger.warning(f"No known features in sentence of {len(tokens)} tokens; predicting label 0")
        return Prediction(label=0, prob=0.5)
    probs = softmax(scores)
    label = 1 if probs[1] > probs[0] else 0
    return Prediction(label=label, prob=float(probs[label]))


# ---------------------------------------------------------------- persistence

def save_detector(model: DetectorModel, path: Union[str, Path]) -> None:
    header = {
        'kind': 'detector',
        'config': model.config.model_dump(mode='json'),
        'labels': list(LABELS),
        'vocab': sorted(model.vocab, key=model.vocab.get),
        'buckets': [[bucket, row] for bucket, row in sorted(model.buckets.items(), key=lambda kv: kv[1])],
        'loss_history': model.loss_history,
    }
    write_container(path, MAGIC, header, [
        ('input_embeddings', model.input_embeddings),
        ('output_weights', model.output_weights),
    ])
    logger.info(f"Saved detector to {path}")


def load_detector(path: Union[str, Path]) -> DetectorModel:
    header, tensors = read_container(path, MAGIC)
    try:
        config = DetectorConfig(**header['config'])
        model = DetectorModel(
            config=config,
            vocab={token: row for row, token in enumerate(header['vocab'])},
            buckets={int(bucket): int(row) for bucket, row in header['buckets']},
            input_embeddings=tensors['input_embeddings'],
            output_weights=tensors['output_weights'],
            loss_history=[float(x) for x in header.get('loss_history', [])],
        )
    except (KeyError, TypeError, ValueError) as e:
        raise ModelFormatError(f"{path} does not hold a detector: {e}") from e

    if model.input_embeddings.shape != (len(model.vocab) + len(model.buckets), config.dim):
        raise ModelFormatError(f"{path}: input embeddings have shape {model.input_embeddings.shape}")
    if model.output_weights.shape != (len(LABELS), config.dim):
        raise ModelFormatError(f"{path}: output weights have shape {model.output_weights.shape}")
    return model
