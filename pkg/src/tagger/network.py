"""
Hypothesis Reader - Tagger Network
Frozen word embeddings, two stacked bidirectional LSTM layers and a
per-position dense softmax over the three tag classes.
"""

from typing import List, Optional, Tuple

import numpy as np
import torch
from torch import nn

from src.tagger.config import TaggerConfig

NUM_TAGS = 3


class MaskedLSTM(nn.Module):
    """
    One LSTM direction unrolled over time. The state only advances on real
    tokens, so padding never reaches a real position from either side.
    """

    def __init__(self, input_size: int, hidden_size: int, reverse: bool = False):
        super().__init__()
        self.hidden_size = hidden_size
        self.reverse = reverse
        self.cell = nn.LSTMCell(input_size, hidden_size)

    def forward(self, x: torch.Tensor, mask: torch.Tensor,
                recurrent_mask: Optional[torch.Tensor] = None) -> torch.Tensor:
        batch, steps, _ = x.shape
        h = x.new_zeros(batch, self.hidden_size)
        c = x.new_zeros(batch, self.hidden_size)
        outputs: List[Optional[torch.Tensor]] = [None] * steps
        order = range(steps - 1, -1, -1) if self.reverse else range(steps)
        for t in order:
            h_in = h * recurrent_mask if recurrent_mask is not None else h
            h_new, c_new = self.cell(x[:, t], (h_in, c))
            m = mask[:, t].unsqueeze(1)
            h = torch.where(m, h_new, h)
            c = torch.where(m, c_new, c)
            outputs[t] = h_new * m.to(x.dtype)
        return torch.stack(outputs, dim=1)


class BiLSTMTagger(nn.Module):
    def __init__(self, embeddings: np.ndarray, config: TaggerConfig):
        super().__init__()
        self.config = config
        self.embedding = nn.Embedding.from_pretrained(torch.as_tensor(embeddings, dtype=torch.float32),
                                                      freeze=True, padding_idx=0)
        dim = embeddings.shape[1]
        self.lstm1_fw = MaskedLSTM(dim, config.lstm1_units)
        self.lstm1_bw = MaskedLSTM(dim, config.lstm1_units, reverse=True)
        self.lstm2_fw = MaskedLSTM(2 * config.lstm1_units, config.lstm2_units)
        self.lstm2_bw = MaskedLSTM(2 * config.lstm1_units, config.lstm2_units, reverse=True)
        self.dense = nn.Linear(2 * config.lstm2_units, NUM_TAGS)

    def directions(self) -> List[Tuple[str, MaskedLSTM]]:
        return [('lstm1_fw', self.lstm1_fw), ('lstm1_bw', self.lstm1_bw),
                ('lstm2_fw', self.lstm2_fw), ('lstm2_bw', self.lstm2_bw)]

    def _dropout_mask(self, shape, rate: float, like: torch.Tensor,
                      generator: Optional[torch.Generator]) -> torch.Tensor:
        keep = torch.full(shape, 1.0 - rate, dtype=like.dtype)
        return torch.bernoulli(keep, generator=generator) / (1.0 - rate)

    def logits(self, indices: torch.Tensor, training: bool = False,
               generator: Optional[torch.Generator] = None) -> torch.Tensor:
        """Per-position class scores; dropout is applied only when ``training``."""
        mask = indices != 0
        x = self.embedding(indices).to(self.dense.weight.dtype)
        batch = x.shape[0]

        if training and self.config.spatial_dropout > 0:
            # One keep/drop decision per embedding channel for the whole sequence
            x = x * self._dropout_mask((batch, 1, x.shape[2]), self.config.spatial_dropout, x, generator)

        def recurrent(layer: MaskedLSTM) -> Optional[torch.Tensor]:
            if not training or self.config.recurrent_dropout <= 0:
                return None
            return self._dropout_mask((batch, layer.hidden_size), self.config.recurrent_dropout, x, generator)

        layer1 = torch.cat([self.lstm1_fw(x, mask, recurrent(self.lstm1_fw)),
                            self.lstm1_bw(x, mask, recurrent(self.lstm1_bw))], dim=2)
        layer2 = torch.cat([self.lstm2_fw(layer1, mask, recurrent(self.lstm2_fw)),
                            self.lstm2_bw(layer1, mask, recurrent(self.lstm2_bw))], dim=2)
        return self.dense(layer2)

    def forward(self, indices: torch.Tensor, training: bool = False,
                generator: Optional[torch.Generator] = None) -> torch.Tensor:
        return torch.softmax(self.logits(indices, training, generator), dim=-1)


def masked_cross_entropy(logits: torch.Tensor, tags: torch.Tensor, mask: torch.Tensor) -> torch.Tensor:
    """Mean categorical cross-entropy over real (non-PAD) positions."""
    log_probs = torch.log_softmax(logits, dim=-1)
    picked = log_probs.gather(2, tags.unsqueeze(2)).squeeze(2)
    weights = mask.to(logits.dtype)
    return -(picked * weights).sum() / weights.sum().clamp(min=1.0)
