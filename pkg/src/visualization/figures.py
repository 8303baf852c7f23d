"""
Hypothesis Reader - Figures
Interactive Plotly charts for corpus statistics, tagger training curves and
word-level explanations.
"""

import logging
from pathlib import Path
from typing import Sequence, Union

import plotly.graph_objects as go
from plotly.subplots import make_subplots

from src.explainer.explainer import Explanation
from src.ingest.stats import CorpusStats
from src.tagger.model import EpochRecord

logger = logging.getLogger(__name__)

POSITIVE_COLOR = '#4ECDC4'
NEGATIVE_COLOR = '#FF6B6B'


def word_count_histogram(stats: CorpusStats) -> go.Figure:
    """Bar chart of candidate sentences per word count, mean and SD in the title."""
    counts = list(stats.histogram.keys())
    frequencies = [stats.histogram[c] for c in counts]

    fig = go.Figure()
    fig.add_trace(go.Bar(
        x=counts,
        y=frequencies,
        marker_color='#45B7D1',
        name='Sentences',
    ))
    fig.add_vline(x=stats.mean_words, line_dash='dash', line_color='#333333')
    fig.update_layout(
        title=(f'Words per candidate sentence (n={stats.sentence_count}, '
               f'mean {stats.mean_words:.1f}, SD {stats.sd_words:.1f})'),
        xaxis_title='Number of words',
        yaxis_title='Frequency',
        bargap=0.05,
        width=800,
        height=400,
    )
    return fig


def training_curve(epoch_log: Sequence[EpochRecord]) -> go.Figure:
    """Accuracy per epoch on the training and validation splits, loss underneath."""
    epochs = [r.epoch for r in epoch_log]

    fig = make_subplots(rows=2, cols=1, shared_xaxes=True, row_heights=[0.65, 0.35],
                        subplot_titles=('Accuracy', 'Training loss'))
    fig.add_trace(go.Scatter(x=epochs, y=[r.train_acc for r in epoch_log], mode='lines+markers',
                             name='Training', line=dict(color='#45B7D1')), row=1, col=1)

    validated = [r for r in epoch_log if r.val_acc is not None]
    if validated:
        fig.add_trace(go.Scatter(x=[r.epoch for r in validated], y=[r.val_acc for r in validated],
                                 mode='lines+markers', name='Validation', line=dict(color='#FF6B6B')),
                      row=1, col=1)

    fig.add_trace(go.Scatter(x=epochs, y=[r.train_loss for r in epoch_log], mode='lines',
                             name='Loss', line=dict(color='#96CEB4')), row=2, col=1)
    fig.update_xaxes(title_text='Epoch', row=2, col=1)
    fig.update_layout(title='Node tagger training', width=800, height=600)
    return fig


def explanation_bars(explanation: Explanation, top: int = 10) -> go.Figure:
    """Horizontal bars of the strongest token weights; positive pushes toward hypothesis."""
    ranked = explanation.ranked()[:top]
    # Plotly draws the first category at the bottom
    ranked = list(reversed(ranked))
    tokens = [token for token, _ in ranked]
    weights = [weight for _, weight in ranked]

    fig = go.Figure()
    fig.add_trace(go.Bar(
        x=weights,
        y=tokens,
        orientation='h',
        marker_color=[POSITIVE_COLOR if w >= 0 else NEGATIVE_COLOR for w in weights],
        text=[f'{w:+.3f}' for w in weights],
        textposition='auto',
    ))
    fig.update_layout(
        title=(f'Word contributions (hypothesis probability {explanation.model_prob:.2f}, '
               f'fidelity {explanation.fidelity:.2f})'),
        xaxis_title='Weight',
        yaxis=dict(type='category'),
        width=800,
        height=max(300, 40 * len(tokens) + 120),
    )
    return fig


def save_figure(fig: go.Figure, path: Union[str, Path]) -> Path:
    """Write a standalone HTML file with plotly.js embedded."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fig.write_html(str(path), include_plotlyjs=True, full_html=True)
    logger.info(f"Figure written to {path}")
    return path
