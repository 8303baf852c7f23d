"""Command line entry point, end-to-end pipeline and synthetic corpora."""

from .pipeline import (RECORD_COLUMNS, HypothesisRecord, PipelineModels, RunConfig, RunSummary, deconstruct,
                       hypothesis_sort_key, load_models, run_pipeline, write_records_csv)

__all__ = [
    "RECORD_COLUMNS",
    "HypothesisRecord",
    "PipelineModels",
    "RunConfig",
    "RunSummary",
    "deconstruct",
    "hypothesis_sort_key",
    "load_models",
    "run_pipeline",
    "write_records_csv",
]
