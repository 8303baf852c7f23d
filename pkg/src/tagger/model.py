"""
Hypothesis Reader - Node Tagger
Trains the bidirectional LSTM tagger, tags hypothesis tokens as non-node (0),
cause (1) or outcome (2) and persists the trained model.
"""

import logging
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import List, Optional, Sequence, Tuple, Union

import numpy as np
import pandas as pd
import torch

from src.errors import EmptyCorpus, MisalignedInput, ModelFormatError
from src.evalkit.folds import make_rng
from src.evalkit.metrics import Metrics, multiclass_metrics
from src.lexicon.glove import WordVectorTable
from src.serialization import read_container, write_container
from src.tagger.config import TaggerConfig
from src.tagger.data import CAUSE, OUTCOME, PAD_INDEX, RESERVED_ROWS, TAG_CLASSES, EmbeddingIndex, TagSequence
from src.tagger.network import BiLSTMTagger, masked_cross_entropy

logger = logging.getLogger(__name__)

MAGIC = b'HYPOTAGGER'
EPOCH_LOG_COLUMNS = ['epoch', 'train_acc', 'val_acc', 'train_loss']


@dataclass(frozen=True)
class EpochRecord:
    epoch: int
    train_acc: float
    val_acc: Optional[float]
    train_loss: float


@dataclass(eq=False)
class TaggerModel:
    config: TaggerConfig
    index: EmbeddingIndex
    network: BiLSTMTagger
    epoch_log: List[EpochRecord] = field(default_factory=list)

    def tag(self, tokens: Sequence[str]) -> TagSequence:
        return tag(self, tokens)

    def save(self, path: Union[str, Path]) -> None:
        save_tagger(self, path)


def encode(index: EmbeddingIndex, sequences: Sequence[TagSequence],
           pad_len: int) -> Tuple[torch.Tensor, torch.Tensor]:
    """Padded index and tag tensors of shape (n, pad_len)."""
    indices = np.stack([index.encode(s.tokens, pad_len) for s in sequences])
    tags = np.zeros_like(indices)
    for row, sequence in enumerate(sequences):
        kept = list(sequence.tags)[:pad_len]
        tags[row, :len(kept)] = kept
    return torch.as_tensor(indices), torch.as_tensor(tags)


def _accuracy(logits: torch.Tensor, tags: torch.Tensor, mask: torch.Tensor) -> Tuple[int, int]:
    correct = ((logits.argmax(dim=-1) == tags) & mask).sum().item()
    return int(correct), int(mask.sum().item())


def _validation_split(n: int, fraction: float, seed: int) -> Tuple[np.ndarray, np.ndarray]:
    n_val = int(round(n * fraction))
    order = make_rng(seed).permutation(n)
    if n_val == 0 or n_val >= n:
        return np.sort(order), np.asarray([], dtype=int)
    return np.sort(order[n_val:]), np.sort(order[:n_val])


def train_tagger(data: Sequence[TagSequence], vectors: WordVectorTable, config: TaggerConfig) -> TaggerModel:
    """
    Minimize masked cross-entropy with RMSprop.

    Args:
        data: gold tag sequences over hypothesis surface tokens
        vectors: frozen word vectors; unknown tokens share a zero row
        config: architecture and schedule; ``config.seed`` fixes initialization,
            the validation split, shuffling and dropout masks
    """
    if not data:
        raise EmptyCorpus("cannot train the tagger on an empty corpus")
    if vectors.dim == 0:
        raise EmptyCorpus("the word-vector table is empty")

    previous = torch.are_deterministic_algorithms_enabled()
    torch.use_deterministic_algorithms(True)
    try:
        return _fit(data, vectors, config)
    finally:
        torch.use_deterministic_algorithms(previous)


def _fit(data: Sequence[TagSequence], vectors: WordVectorTable, config: TaggerConfig) -> TaggerModel:
    torch.manual_seed(config.seed)
    generator = torch.Generator().manual_seed(config.seed)
    rng = make_rng(config.seed)

    index = EmbeddingIndex.from_table(vectors)
    network = BiLSTMTagger(index.matrix, config)
    optimizer = torch.optim.RMSprop(
        [p for p in network.parameters() if p.requires_grad],
        lr=config.optimizer_lr, alpha=config.rho, eps=config.epsilon,
    )

    train_ids, val_ids = _validation_split(len(data), config.validation_fraction, config.seed)
    train_x, train_y = encode(index, [data[i] for i in train_ids], config.pad_len)
    val_x, val_y = (encode(index, [data[i] for i in val_ids], config.pad_len) if len(val_ids) else (None, None))

    logger.info(f"Training tagger: {len(train_ids)} train / {len(val_ids)} validation sequences, "
                f"{config.epochs} epochs, vocabulary {len(index.tokens)}")

    epoch_log: List[EpochRecord] = []
    for epoch in range(1, config.epochs + 1):
        network.train()
        order = torch.as_tensor(rng.permutation(len(train_ids)))
        total_loss, correct, counted = 0.0, 0, 0
        for start in range(0, len(order), config.batch_size):
            batch = order[start:start + config.batch_size]
            x, y = train_x[batch], train_y[batch]
            mask = x != PAD_INDEX
            optimizer.zero_grad()
            logits = network.logits(x, training=True, generator=generator)
            loss = masked_cross_entropy(logits, y, mask)
            loss.backward()
            optimizer.step()

            tokens = int(mask.sum().item())
            total_loss += loss.item() * tokens
            c, n = _accuracy(logits.detach(), y, mask)
            correct += c
            counted += n

        val_acc = None
        if val_x is not None:
            network.eval()
            with torch.no_grad():
                val_logits = network.logits(val_x)
            c, n = _accuracy(val_logits, val_y, val_x != PAD_INDEX)
            val_acc = c / n if n else None

        record = EpochRecord(epoch=epoch, train_acc=correct / max(counted, 1), val_acc=val_acc,
                             train_loss=total_loss / max(counted, 1))
        epoch_log.append(record)
        val_text = f"{val_acc:.4f}" if val_acc is not None else "n/a"
        logger.info(f"Epoch {epoch}/{config.epochs}: loss {record.train_loss:.4f}, "
                    f"train acc {record.train_acc:.4f}, val acc {val_text}")

    network.eval()
    return TaggerModel(config=config, index=index, network=network, epoch_log=epoch_log)


def tag_many(model: TaggerModel, sentences: Sequence[Sequence[str]]) -> List[TagSequence]:
    """Argmax tags without dropout; tokens beyond ``pad_len`` are tagged 0."""
    if not sentences:
        return []
    for tokens in sentences:
        if not tokens:
            raise ValueError("cannot tag an empty sentence")

    pad_len = model.config.pad_len
    indices = torch.as_tensor(np.stack([model.index.encode(t, pad_len) for t in sentences]))
    model.network.eval()
    with torch.no_grad():
        predicted = model.network.logits(indices).argmax(dim=-1).numpy()

    results = []
    for tokens, row in zip(sentences, predicted):
        tags = [int(t) for t in row[:min(len(tokens), pad_len)]]
        tags += [0] * (len(tokens) - len(tags))
        results.append(TagSequence(tokens=tuple(tokens), tags=tuple(tags)))
    return results


def tag(model: TaggerModel, tokens: Sequence[str]) -> TagSequence:
    return tag_many(model, [tokens])[0]


def per_class_metrics(preds: Sequence[TagSequence], golds: Sequence[TagSequence]) -> Metrics:
    """
    Token-level metrics per tag class. The aggregate is the micro average over
    the cause and outcome classes; accuracy counts every token.
    """
    if len(preds) != len(golds):
        raise MisalignedInput(f"{len(preds)} predicted sequences for {len(golds)} gold sequences")
    flat_pred: List[int] = []
    flat_gold: List[int] = []
    for p, g in zip(preds, golds):
        if len(p.tags) != len(g.tags):
            raise MisalignedInput(f"sequence lengths differ: {len(p.tags)} vs {len(g.tags)}")
        flat_pred.extend(p.tags)
        flat_gold.extend(g.tags)
    return multiclass_metrics(flat_pred, flat_gold, classes=TAG_CLASSES, average='micro',
                              scored_classes=(CAUSE, OUTCOME))


def evaluate_tagger(model: TaggerModel, data: Sequence[TagSequence]) -> Metrics:
    return per_class_metrics(tag_many(model, [s.tokens for s in data]), data)


def epoch_log_frame(records: Sequence[EpochRecord]) -> pd.DataFrame:
    return pd.DataFrame([asdict(r) for r in records], columns=EPOCH_LOG_COLUMNS)


def write_epoch_log(records: Sequence[EpochRecord], path: Union[str, Path]) -> None:
    epoch_log_frame(records).to_csv(path, index=False, lineterminator='\n')
    logger.info(f"Epoch log written to {path}")


# ---------------------------------------------------------------- persistence

def save_tagger(model: TaggerModel, path: Union[str, Path]) -> None:
    tensors = [('embeddings', model.index.matrix)]
    for name, tensor in model.network.state_dict().items():
        if name != 'embedding.weight':
            tensors.append((name, tensor.detach().cpu().numpy()))
    header = {
        'kind': 'tagger',
        'config': model.config.model_dump(mode='json'),
        'vocab': list(model.index.tokens),
        'epoch_log': [asdict(r) for r in model.epoch_log],
    }
    write_container(path, MAGIC, header, tensors)
    logger.info(f"Saved tagger to {path}")


def load_tagger(path: Union[str, Path]) -> TaggerModel:
    header, tensors = read_container(path, MAGIC)
    try:
        config = TaggerConfig(**header['config'])
        matrix = tensors.pop('embeddings')
        index = EmbeddingIndex(header['vocab'], matrix[RESERVED_ROWS:])
        network = BiLSTMTagger(index.matrix, config)
        state = {name: torch.as_tensor(array) for name, array in tensors.items()}
        state['embedding.weight'] = network.embedding.weight.detach().clone()
        network.load_state_dict(state)
        epoch_log = [EpochRecord(**r) for r in header.get('epoch_log', [])]
    except (KeyError, TypeError, ValueError, RuntimeError) as e:
        raise ModelFormatError(f"{path} does not hold a tagger: {e}") from e
    network.eval()
    return TaggerModel(config=config, index=index, network=network, epoch_log=epoch_log)
