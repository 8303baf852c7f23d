"""Plotly figures for corpus statistics, training curves and explanations."""

from .figures import explanation_bars, save_figure, training_curve, word_count_histogram

__all__ = [
    "explanation_bars",
    "save_figure",
    "training_curve",
    "word_count_histogram",
]
