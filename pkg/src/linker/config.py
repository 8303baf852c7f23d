"""
Hypothesis Reader - Linker Configuration
"""

from typing import Tuple

from pydantic import BaseModel, ConfigDict, Field, field_validator

DEFAULT_GRID = (100.0, 10.0, 1.0, 0.1, 0.01)


class LinkerConfig(BaseModel):
    """Bag-of-n-grams features and logistic-regression tuning for both link classifiers."""

    model_config = ConfigDict(extra='forbid', frozen=True)

    max_n: int = Field(default=3, ge=1, le=3)
    min_count: int = Field(default=1, ge=1)
    reg_strength: float = Field(default=1.0, ge=0.0)
    grid: Tuple[float, ...] = DEFAULT_GRID
    folds: int = Field(default=10, ge=2)
    repeats: int = Field(default=3, ge=1)
    tune: bool = True
    max_iter: int = Field(default=2000, ge=1)
    seed: int = Field(default=42, ge=0, lt=2 ** 63)

    @field_validator('grid')
    @classmethod
    def _check_grid(cls, grid: Tuple[float, ...]) -> Tuple[float, ...]:
        if not grid:
            raise ValueError("grid must not be empty")
        if any(g < 0 for g in grid):
            raise ValueError("grid values must be >= 0")
        return grid
