"""
Hypothesis Reader - Logistic Regression
L2-regularized binary (sigmoid) and multinomial (softmax) logistic
regression fitted with full-batch L-BFGS.
"""

import logging
from dataclasses import dataclass
from enum import Enum
from typing import Hashable, List, Sequence, Tuple, Union

import numpy as np
from scipy import sparse
from scipy.optimize import minimize
from scipy.special import expit, log_softmax, softmax

from src.errors import MisalignedInput, SingleClass

logger = logging.getLogger(__name__)

GTOL = 1e-6

Matrix = Union[np.ndarray, sparse.spmatrix]


class LinkTask(str, Enum):
    CAUSALITY = 'causality'
    DIRECTION = 'direction'


@dataclass(eq=False)
class LogisticModel:
    """One weight row for a binary task, one per class otherwise."""
    task: LinkTask
    classes: Tuple[Hashable, ...]
    weights: np.ndarray
    bias: np.ndarray
    reg_strength: float

    @property
    def binary(self) -> bool:
        return len(self.classes) == 2

    def decision(self, X: Matrix) -> np.ndarray:
        W = self.weights.astype(np.float64)
        return np.asarray(X @ W.T) + self.bias.astype(np.float64)

    def predict_proba(self, X: Matrix) -> np.ndarray:
        """Class probabilities, columns in ``classes`` order."""
        z = self.decision(X)
        if self.binary:
            p1 = expit(z[:, 0])
            return np.column_stack([1.0 - p1, p1])
        return softmax(z, axis=1)

    def predict(self, X: Matrix) -> List[Hashable]:
        """Argmax class; ties go to the earlier class."""
        probs = self.predict_proba(X)
        if self.binary:
            return [self.classes[1] if p > 0.5 else self.classes[0] for p in probs[:, 1]]
        return [self.classes[i] for i in probs.argmax(axis=1)]


def _unpack(params: np.ndarray, rows: int, n_features: int) -> Tuple[np.ndarray, np.ndarray]:
    W = params[:rows * n_features].reshape(rows, n_features)
    return W, params[rows * n_features:]


def logistic_objective(params: np.ndarray, X: Matrix, y: np.ndarray, n_classes: int,
                       reg_strength: float) -> Tuple[float, np.ndarray]:
    """
    Summed negative log-likelihood plus ``reg_strength / 2 * ||W||^2`` and its
    gradient. ``y`` holds class positions; biases are not penalized.
    """
    n_features = X.shape[1]
    rows = 1 if n_classes == 2 else n_classes
    W, b = _unpack(params, rows, n_features)
    z = np.asarray(X @ W.T) + b

    if n_classes == 2:
        z = z[:, 0]
        loss = float(np.sum(np.logaddexp(0.0, z) - y * z))
        residual = (expit(z) - y)[:, None]
    else:
        log_probs = log_softmax(z, axis=1)
        loss = -float(np.sum(log_probs[np.arange(len(y)), y]))
        residual = np.exp(log_probs)
        residual[np.arange(len(y)), y] -= 1.0

    grad_W = np.asarray(X.T @ residual).T + reg_strength * W
    grad_b = residual.sum(axis=0)
    loss += 0.5 * reg_strength * float(np.sum(W * W))
    return loss, np.concatenate([grad_W.ravel(), grad_b])


def negative_log_likelihood(model: LogisticModel, X: Matrix, y: Sequence[Hashable]) -> float:
    """Unpenalized summed NLL of ``model`` on (X, y)."""
    positions = np.asarray([model.classes.index(label) for label in y])
    probs = model.predict_proba(X)
    return -float(np.sum(np.log(np.clip(probs[np.arange(len(positions)), positions], 1e-300, None))))


def train_logreg(X: Matrix, y: Sequence[Hashable], classes: Sequence[Hashable], task: LinkTask,
                 reg_strength: float = 1.0, max_iter: int = 2000) -> LogisticModel:
    """
    Fit by L-BFGS until the gradient max-norm is below 1e-6 or ``max_iter``.

    Args:
        X: feature matrix (dense or sparse), one row per sentence
        y: labels drawn from ``classes``
        classes: ordered class list; position decides tie-breaking
        reg_strength: L2 penalty on the weights
    """
    if X.shape[0] != len(y):
        raise MisalignedInput(f"{X.shape[0]} feature rows for {len(y)} labels")
    classes = tuple(classes)
    unknown = set(y) - set(classes)
    if unknown:
        raise ValueError(f"labels {sorted(map(str, unknown))} are not in {classes}")
    if len(set(y)) < 2:
        raise SingleClass(f"{task.value} training data contains a single class")

    positions = np.asarray([classes.index(label) for label in y])
    rows = 1 if len(classes) == 2 else len(classes)
    x0 = np.zeros(rows * X.shape[1] + rows)

    result = minimize(
        logistic_objective, x0, args=(X, positions, len(classes), reg_strength),
        jac=True, method='L-BFGS-B', options={'gtol': GTOL, 'maxiter': max_iter},
    )
    if not result.success:
        logger.debug(f"{task.value} fit stopped after {result.nit} iterations: {result.message}")

    W, b = _unpack(result.x, rows, X.shape[1])
    return LogisticModel(task=task, classes=classes, weights=W.astype(np.float32),
                         bias=b.astype(np.float32), reg_strength=reg_strength)
