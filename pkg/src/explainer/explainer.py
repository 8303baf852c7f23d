"""
Hypothesis Reader - Prediction Explainer
Local word-importance explanations: remove words from a sentence, re-score
each variation with the detector and fit a weighted linear stand-in model
over token-presence bits.
"""

import logging
from dataclasses import dataclass, field, replace
from typing import Any, Dict, List, Optional, Protocol, Sequence, Tuple

import numpy as np
from sklearn.linear_model import LinearRegression, Ridge

from src.evalkit.folds import make_rng

logger = logging.getLogger(__name__)

DROP_PROBABILITY = 0.3
DEFAULT_RIDGE = 1e-3
KERNEL_WIDTH_FACTOR = 0.25
# Random masks refine the fit; the full sentence and single-word deletions anchor it
RANDOM_MASK_WEIGHT = 1e-3


class HypothesisScorer(Protocol):
    def hypothesis_prob(self, tokens: Sequence[str]) -> float: ...


@dataclass(frozen=True)
class Perturbation:
    mask: Tuple[int, ...]
    tokens_kept: Tuple[str, ...]
    model_prob: Optional[float] = None

    @property
    def removed(self) -> int:
        return len(self.mask) - sum(self.mask)


@dataclass(frozen=True)
class Explanation:
    tokens: Tuple[str, ...]
    weights: Tuple[float, ...]
    intercept: float
    fidelity: float
    model_prob: float
    ridge: float
    kernel_width: float
    n_perturbations: int
    random_mask_weight: float = RANDOM_MASK_WEIGHT
    perturbations: Tuple[Perturbation, ...] = field(default=(), repr=False)

    def ranked(self) -> List[Tuple[str, float]]:
        """(token, weight) pairs by decreasing absolute weight; ties keep sentence order."""
        order = sorted(range(len(self.tokens)), key=lambda i: -abs(self.weights[i]))
        return [(self.tokens[i], self.weights[i]) for i in order]

    def to_record(self, text: str, prediction: Optional[Dict[str, Any]] = None) -> Dict[str, Any]:
        return {
            'text': text,
            'tokens': [{'token': t, 'weight': w} for t, w in self.ranked()],
            'intercept': self.intercept,
            'fidelity': self.fidelity,
            'prediction': prediction,
            'metadata': {
                'ridge': self.ridge,
                'kernel_width': self.kernel_width,
                'n_perturbations': self.n_perturbations,
                'random_mask_weight': self.random_mask_weight,
            },
        }


def _keep(tokens: Sequence[str], mask: Sequence[int]) -> Tuple[str, ...]:
    return tuple(t for t, bit in zip(tokens, mask) if bit)


def perturb(tokens: Sequence[str], n_random: int = 0, seed: int = 0) -> List[Perturbation]:
    """
    The full sentence, every leave-one-out variation (sentences of two or more
    tokens) and ``n_random`` seeded masks dropping each token with probability
    0.3 while keeping at least one token.
    """
    if not tokens:
        raise ValueError("cannot perturb an empty sentence")
    if n_random < 0:
        raise ValueError(f"n_random must be >= 0, got {n_random}")

    length = len(tokens)
    masks: List[Tuple[int, ...]] = [(1,) * length]
    if length >= 2:
        for i in range(length):
            masks.append(tuple(0 if j == i else 1 for j in range(length)))

    rng = make_rng(seed)
    for _ in range(n_random):
        keep = rng.random(length) >= DROP_PROBABILITY
        if not keep.any():
            keep[int(rng.integers(length))] = True
        masks.append(tuple(int(bit) for bit in keep))

    return [Perturbation(mask=m, tokens_kept=_keep(tokens, m)) for m in masks]


def kernel_weights(perturbations: Sequence[Perturbation], length: int) -> np.ndarray:
    """exp(-d^2 / width^2) with d the number of removed tokens and width = 0.25 * length."""
    width = KERNEL_WIDTH_FACTOR * length
    distances = np.asarray([p.removed for p in perturbations], dtype=np.float64)
    return np.exp(-(distances ** 2) / width ** 2)


def explain(model: HypothesisScorer, tokens: Sequence[str], n_random: int = 0, seed: int = 0,
            ridge: float = DEFAULT_RIDGE) -> Explanation:
    """
    Explain the hypothesis probability ``model`` assigns to ``tokens``.

    Args:
        model: anything with ``hypothesis_prob(tokens)``, normally a trained detector
        tokens: the sentence as the detector sees it
        n_random: random multi-word masks added to the leave-one-out set
            (kernel weight scaled by RANDOM_MASK_WEIGHT, so the fitted weights stay
            close to the leave-one-out probability changes)
        seed: seed of the random masks
        ridge: L2 penalty of the stand-in; 0 gives weighted least squares
    """
    if ridge < 0:
        raise ValueError(f"ridge must be >= 0, got {ridge}")
    tokens = tuple(tokens)
    if not tokens:
        raise ValueError("cannot explain an empty sentence")

    full_prob = float(model.hypothesis_prob(tokens))
    width = KERNEL_WIDTH_FACTOR * len(tokens)

    if len(tokens) == 1:
        intercept = float(model.hypothesis_prob(()))
        return Explanation(
            tokens=tokens, weights=(full_prob - intercept,), intercept=intercept, fidelity=1.0,
            model_prob=full_prob, ridge=ridge, kernel_width=width, n_perturbations=1,
            perturbations=(Perturbation(mask=(1,), tokens_kept=tokens, model_prob=full_prob),),
        )

    perturbations = [replace(p, model_prob=float(model.hypothesis_prob(p.tokens_kept)))
                     for p in perturb(tokens, n_random, seed)]
    X = np.asarray([p.mask for p in perturbations], dtype=np.float64)
    y = np.asarray([p.model_prob for p in perturbations], dtype=np.float64)
    sample_weight = kernel_weights(perturbations, len(tokens))
    # perturb() lists the full sentence and the leave-one-out masks first
    sample_weight[1 + len(tokens):] *= RANDOM_MASK_WEIGHT

    stand_in = LinearRegression() if ridge == 0 else Ridge(alpha=ridge)
    stand_in.fit(X, y, sample_weight=sample_weight)

    fitted = stand_in.predict(X)
    fidelity = float(np.clip(1.0 - np.mean(np.abs(fitted - y)), 0.0, 1.0))
    logger.debug(f"Explained {len(tokens)}-token sentence over {len(perturbations)} variations, "
                 f"fidelity {fidelity:.4f}")

    return Explanation(
        tokens=tokens,
        weights=tuple(float(w) for w in stand_in.coef_),
        intercept=float(stand_in.intercept_),
        fidelity=fidelity,
        model_prob=full_prob,
        ridge=ridge,
        kernel_width=width,
        n_perturbations=len(perturbations),
        perturbations=tuple(perturbations),
    )


def leave_one_out_deltas(model: HypothesisScorer, tokens: Sequence[str]) -> List[float]:
    """P(full) - P(without token i) for every position."""
    full = model.hypothesis_prob(tokens)
    return [full - model.hypothesis_prob([t for j, t in enumerate(tokens) if j != i])
            for i in range(len(tokens))]
