"""
Hypothesis Reader - Fold Plans
Seeded k-fold, stratified k-fold and hold-out splits.
"""

from dataclasses import dataclass
from typing import Any, Dict, Hashable, List, Optional, Sequence, Tuple

import numpy as np

from src.errors import FoldError

RNG_ALGORITHM = 'PCG64'


def make_rng(seed: int) -> np.random.Generator:
    """The documented generator behind every shuffle in the project."""
    return np.random.Generator(np.random.PCG64(seed))


@dataclass(frozen=True)
class FoldPlan:
    k: int
    assignments: Tuple[int, ...]
    stratified: bool
    seed: int
    rng_algorithm: str = RNG_ALGORITHM

    @property
    def n(self) -> int:
        return len(self.assignments)

    def test_indices(self, fold: int) -> np.ndarray:
        return np.flatnonzero(np.asarray(self.assignments) == fold)

    def train_indices(self, fold: int) -> np.ndarray:
        return np.flatnonzero(np.asarray(self.assignments) != fold)

    def folds(self) -> List[np.ndarray]:
        return [self.test_indices(f) for f in range(self.k)]

    def splits(self):
        """Yield (train, test) index arrays for every fold."""
        for fold in range(self.k):
            yield self.train_indices(fold), self.test_indices(fold)

    def to_dict(self) -> Dict[str, Any]:
        return {
            'k': self.k,
            'stratified': self.stratified,
            'seed': self.seed,
            'rng_algorithm': self.rng_algorithm,
            'assignments': list(self.assignments),
        }


def _check_sizes(n: int, k: int) -> None:
    if k < 2:
        raise FoldError(f"k must be at least 2, got {k}")
    if n < k:
        raise FoldError(f"cannot split {n} items into {k} folds")


def kfold(n: int, k: int, seed: int) -> FoldPlan:
    """Seeded shuffle, then round-robin fold assignment."""
    _check_sizes(n, k)
    order = make_rng(seed).permutation(n)
    assignments = np.empty(n, dtype=int)
    assignments[order] = np.arange(n) % k
    return FoldPlan(k=k, assignments=tuple(int(a) for a in assignments), stratified=False, seed=seed)


def stratified_kfold(labels: Sequence[Hashable], k: int, seed: int) -> FoldPlan:
    """
    Round-robin within each class, continuing the fold counter from one class
    to the next so overall fold sizes also differ by at most one.
    """
    n = len(labels)
    _check_sizes(n, k)
    rng = make_rng(seed)
    labels_arr = np.asarray([str(label) for label in labels])

    assignments = np.empty(n, dtype=int)
    offset = 0
    for cls in sorted(set(labels_arr.tolist())):
        members = np.flatnonzero(labels_arr == cls)
        members = members[rng.permutation(len(members))]
        assignments[members] = (offset + np.arange(len(members))) % k
        offset += len(members)

    return FoldPlan(k=k, assignments=tuple(int(a) for a in assignments), stratified=True, seed=seed)


def holdout_split(n: int, train_fraction: float = 0.75, seed: int = 0) -> Tuple[np.ndarray, np.ndarray]:
    """Disjoint, exhaustive (train, test) split of range(n)."""
    if not 0.0 < train_fraction < 1.0:
        raise FoldError(f"train_fraction must lie strictly between 0 and 1, got {train_fraction}")
    if n < 2:
        raise FoldError(f"need at least 2 items for a hold-out split, got {n}")

    n_train = int(round(n * train_fraction))
    n_train = min(max(n_train, 1), n - 1)
    order = make_rng(seed).permutation(n)
    return np.sort(order[:n_train]), np.sort(order[n_train:])


def repeat_seeds(seed: int, repeats: int) -> List[int]:
    """Independent child seeds for repeated cross-validation."""
    children = np.random.SeedSequence(seed).spawn(repeats)
    return [int(child.generate_state(1, dtype=np.uint64)[0] >> np.uint64(1)) for child in children]
