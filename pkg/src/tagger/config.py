"""
Hypothesis Reader - Tagger Configuration
"""

from pydantic import BaseModel, ConfigDict, Field


class TaggerConfig(BaseModel):
    """Two-layer bidirectional LSTM tagger and its RMSprop training schedule."""

    model_config = ConfigDict(extra='forbid', frozen=True)

    pad_len: int = Field(default=50, ge=1)
    lstm1_units: int = Field(default=32, ge=1)
    lstm2_units: int = Field(default=128, ge=1)
    spatial_dropout: float = Field(default=0.5, ge=0.0, lt=1.0)
    recurrent_dropout: float = Field(default=0.1, ge=0.0, lt=1.0)
    optimizer_lr: float = Field(default=1e-3, gt=0)
    rho: float = Field(default=0.9, gt=0.0, lt=1.0)
    epsilon: float = Field(default=1e-7, gt=0)
    batch_size: int = Field(default=32, ge=1)
    epochs: int = Field(default=50, ge=1)
    validation_fraction: float = Field(default=0.1, ge=0.0, lt=1.0)
    seed: int = Field(default=42, ge=0, lt=2 ** 63)
