"""
Hypothesis Reader - Figure Tests
"""

from src.explainer.explainer import explain
from src.ingest.stats import stats_from_counts
from src.tagger.model import EpochRecord
from src.visualization.figures import explanation_bars, save_figure, training_curve, word_count_histogram


class WordScorer:
    def hypothesis_prob(self, tokens):
        return 0.2 + 0.5 * ('associated' in tokens) - 0.1 * ('discussion' in tokens)


def test_word_count_histogram_bins():
    fig = word_count_histogram(stats_from_counts([12, 12, 15, 20]))
    bars = fig.data[0]
    assert list(bars.x) == [12, 15, 20]
    assert list(bars.y) == [2, 1, 1]
    assert 'n=4' in fig.layout.title.text


def test_training_curve_skips_missing_validation():
    log = [EpochRecord(1, 0.7, None, 0.9), EpochRecord(2, 0.8, 0.75, 0.6), EpochRecord(3, 0.9, 0.8, 0.4)]
    fig = training_curve(log)
    names = [trace.name for trace in fig.data]
    assert names == ['Training', 'Validation', 'Loss']
    assert list(fig.data[1].x) == [2, 3]


def test_explanation_bars_strongest_on_top():
    explanation = explain(WordScorer(), ['firm', 'associated', 'discussion'], ridge=0.0)
    fig = explanation_bars(explanation)
    assert fig.data[0].y[-1] == 'associated'
    assert len(fig.data[0].y) == 3


def test_save_figure_writes_html(tmp_path):
    path = save_figure(word_count_histogram(stats_from_counts([5, 6])), tmp_path / 'plots' / 'hist.html')
    assert path.exists()
    assert '<html>' in path.read_text(encoding='utf-8').lower()
