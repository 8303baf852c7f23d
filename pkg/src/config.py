"""
Hypothesis Reader - Configuration Module
Centralized environment configuration for the extraction pipeline.
"""

import os
import logging
from typing import List, Optional

from dotenv import load_dotenv

load_dotenv()

logger = logging.getLogger(__name__)

VALID_LOG_LEVELS = ['DEBUG', 'INFO', 'WARNING', 'ERROR', 'CRITICAL']


def _int_env(name: str, default: int) -> int:
    raw = os.getenv(name)
    if raw is None or raw == '':
        return default
    try:
        return int(raw)
    except ValueError:
        logger.warning(f"{name}='{raw}' is not an integer, using {default}")
        return default


def _float_env(name: str, default: float) -> float:
    raw = os.getenv(name)
    if raw is None or raw == '':
        return default
    try:
        return float(raw)
    except ValueError:
        logger.warning(f"{name}='{raw}' is not a number, using {default}")
        return default


class Config:
    """Configuration class for the hypothesis pipeline."""

    # External PDF-to-text command, e.g. "pdftotext -layout {input} -"
    PDF_EXTRACTOR: Optional[str] = os.getenv('HYPO_PDF_EXTRACTOR') or None

    SEED = _int_env('HYPO_SEED', 42)
    LOG_LEVEL = os.getenv('HYPO_LOG_LEVEL', 'INFO').upper()

    # Candidate censoring and detection
    MAX_WORDS = _int_env('HYPO_MAX_WORDS', 60)
    THRESHOLD = _float_env('HYPO_THRESHOLD', 0.5)

    WORKERS = _int_env('HYPO_WORKERS', 1)

    @classmethod
    def extractor_command(cls, override: Optional[str] = None) -> Optional[str]:
        """Extractor template in effect, a CLI override winning over the environment."""
        return override or cls.PDF_EXTRACTOR

    @classmethod
    def validate_config(cls) -> bool:
        """Validate configuration values; problems are logged."""
        errors: List[str] = []

        if cls.LOG_LEVEL not in VALID_LOG_LEVELS:
            logger.warning(f"HYPO_LOG_LEVEL '{cls.LOG_LEVEL}' is unknown. Valid levels: {VALID_LOG_LEVELS}")

        if cls.MAX_WORDS < 1:
            errors.append(f"HYPO_MAX_WORDS must be >= 1, got {cls.MAX_WORDS}")

        if not 0.0 <= cls.THRESHOLD <= 1.0:
            errors.append(f"HYPO_THRESHOLD must lie in [0, 1], got {cls.THRESHOLD}")

        if cls.WORKERS < 1:
            errors.append(f"HYPO_WORKERS must be >= 1, got {cls.WORKERS}")

        if cls.PDF_EXTRACTOR and '{input}' not in cls.PDF_EXTRACTOR:
            errors.append("HYPO_PDF_EXTRACTOR must contain an {input} placeholder")

        logger.debug(f"Configuration loaded: seed={cls.SEED}, max_words={cls.MAX_WORDS}, threshold={cls.THRESHOLD}")

        if errors:
            for error in errors:
                logger.error(error)
            return False

        return True


def load_model_config(path, config_cls):
    """Read a key/value YAML file into a pydantic config class."""
    # Imported here so environment configuration stays importable without them
    import yaml
    from pydantic import ValidationError

    from src.errors import ConfigError

    try:
        with open(path, encoding='utf-8') as f:
            data = yaml.safe_load(f) or {}
    except OSError as e:
        raise ConfigError(f"cannot read config file {path}: {e}") from e
    except yaml.YAMLError as e:
        raise ConfigError(f"config file {path} is not valid YAML: {e}") from e

    if not isinstance(data, dict):
        raise ConfigError(f"config file {path} must contain key: value pairs")

    try:
        return config_cls(**data)
    except ValidationError as e:
        raise ConfigError(f"invalid {config_cls.__name__} in {path}: {e}") from e
