"""
Hypothesis Reader - Detector Configuration
Hyper-parameters of the sentence-level hypothesis classifier.
"""

from enum import Enum

from pydantic import BaseModel, ConfigDict, Field, model_validator

DEFAULT_BUCKET_COUNT = 2_000_003


class LossMode(str, Enum):
    SOFTMAX = 'softmax'
    NEGATIVE_SAMPLING = 'negative_sampling'


class DetectorConfig(BaseModel):
    """Word n-gram order, learning rate, embedding size and loss of the detector."""

    model_config = ConfigDict(extra='forbid', frozen=True)

    ngram: int = Field(default=1, ge=1, le=5)
    lr: float = Field(default=0.3, gt=0)
    dim: int = Field(default=120, ge=1)
    loss: LossMode = LossMode.NEGATIVE_SAMPLING
    epochs: int = Field(default=5, ge=1)
    neg_samples: int = Field(default=5, ge=0)
    bucket_count: int = Field(default=DEFAULT_BUCKET_COUNT, ge=1)
    seed: int = Field(default=42, ge=0, lt=2 ** 64)

    @model_validator(mode='after')
    def _check_negatives(self) -> 'DetectorConfig':
        if self.loss == LossMode.NEGATIVE_SAMPLING and self.neg_samples < 1:
            raise ValueError("neg_samples must be >= 1 with negative sampling")
        return self


# The four published parametrizations; number 4 is the recommended default.
PARAMETRIZATIONS = {
    1: {'ngram': 1, 'lr': 0.1},
    2: {'ngram': 2, 'lr': 0.1},
    3: {'ngram': 5, 'lr': 0.1},
    4: {'ngram': 1, 'lr': 0.3},
}


def parametrization(number: int, loss: LossMode = LossMode.NEGATIVE_SAMPLING, **overrides) -> DetectorConfig:
    """Preset configuration ``number`` (1-4) with a 120-dimension embedding."""
    if number not in PARAMETRIZATIONS:
        raise ValueError(f"parametrization must be one of {sorted(PARAMETRIZATIONS)}, got {number}")
    values = dict(PARAMETRIZATIONS[number], dim=120, loss=loss)
    values.update(overrides)
    return DetectorConfig(**values)
