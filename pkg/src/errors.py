"""
Hypothesis Reader - Error Types
Exception hierarchy shared by every pipeline stage.
"""

from typing import Optional


class HypothesisPipelineError(Exception):
    """Base class for all pipeline errors."""


class UnreadableDocument(HypothesisPipelineError):
    pass


class EmptyDocument(HypothesisPipelineError):
    pass


class ExtractorFailed(HypothesisPipelineError):
    pass


class DimensionMismatch(HypothesisPipelineError):
    pass


class DuplicateToken(HypothesisPipelineError):
    pass


class MalformedVector(HypothesisPipelineError):
    pass


class EmptyCorpus(HypothesisPipelineError):
    pass


class SingleClass(HypothesisPipelineError):
    pass


class InvalidTag(HypothesisPipelineError):
    pass


class MisalignedInput(HypothesisPipelineError):
    pass


class FoldError(HypothesisPipelineError):
    pass


class ModelFormatError(HypothesisPipelineError):
    pass


class ConfigError(HypothesisPipelineError):
    pass


class DataFormatError(HypothesisPipelineError):
    """Malformed record in an input file; carries the 1-based line number."""

    def __init__(self, path: str, line_number: Optional[int], message: str):
        self.path = path
        self.line_number = line_number
        location = f"{path}:{line_number}" if line_number is not None else path
        super().__init__(f"{location}: {message}")
