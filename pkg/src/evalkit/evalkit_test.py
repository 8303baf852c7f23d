"""
Hypothesis Reader - Evaluation Kit Tests
"""

import numpy as np
import pytest

from src.errors import FoldError, MisalignedInput
from src.evalkit.folds import holdout_split, kfold, stratified_kfold
from src.evalkit.metrics import binary_metrics, confusion_counts, f1_score, multiclass_metrics
from src.evalkit.reports import REPORT_COLUMNS, metrics_frame, report_row, write_report


def brute_force_counts(preds, golds, positive):
    tp = fp = fn = tn = 0
    for p, g in zip(preds, golds):
        if p == positive and g == positive:
            tp += 1
        elif p == positive:
            fp += 1
        elif g == positive:
            fn += 1
        else:
            tn += 1
    return tp, fp, fn, tn


def test_f1_matches_published_rows():
    assert f1_score(0.935, 0.914) == pytest.approx(0.924, abs=5e-4)
    assert f1_score(0.924, 0.919) == pytest.approx(0.922, abs=5e-4)
    assert f1_score(1.0, 1.0) == 1.0
    assert f1_score(0.0, 0.0) == 0.0


@pytest.mark.parametrize("p,r", [(0.2, 0.9), (0.5, 0.5), (0.99, 0.01), (0.0, 0.7)])
def test_f1_symmetric_and_bounded_by_arithmetic_mean(p, r):
    assert f1_score(p, r) == f1_score(r, p)
    assert f1_score(p, r) <= (p + r) / 2 + 1e-12


def test_confusion_counts_basic():
    assert confusion_counts([1, 0, 1], [1, 0, 1], 1).fp == 0
    counts = confusion_counts([1, 1, 1, 1], [0, 0, 0, 0], 1)
    assert (counts.tp, counts.fp, counts.fn, counts.tn) == (0, 4, 0, 0)
    with pytest.raises(MisalignedInput):
        confusion_counts([1], [1, 0], 1)


def test_metrics_equal_brute_force_on_random_fixtures():
    rng = np.random.default_rng(7)
    for _ in range(100):
        n = int(rng.integers(1, 60))
        preds = rng.integers(0, 2, n).tolist()
        golds = rng.integers(0, 2, n).tolist()
        tp, fp, fn, tn = brute_force_counts(preds, golds, 1)
        counts = confusion_counts(preds, golds, 1)
        assert (counts.tp, counts.fp, counts.fn, counts.tn) == (tp, fp, fn, tn)

        m = binary_metrics(preds, golds)
        precision = tp / (tp + fp) if tp + fp else 0.0
        recall = tp / (tp + fn) if tp + fn else 0.0
        f1 = 2 * precision * recall / (precision + recall) if precision + recall else 0.0
        assert m.precision == precision
        assert m.recall == recall
        assert m.f1 == pytest.approx(f1, abs=1e-12)
        assert m.accuracy == pytest.approx((tp + tn) / n, abs=1e-12)


def test_confusion_counts_on_thousand_items():
    rng = np.random.default_rng(11)
    preds = rng.integers(0, 3, 1000).tolist()
    golds = rng.integers(0, 3, 1000).tolist()
    for positive in (0, 1, 2):
        counts = confusion_counts(preds, golds, positive)
        assert (counts.tp, counts.fp, counts.fn, counts.tn) == brute_force_counts(preds, golds, positive)


def test_macro_and_micro_aggregations_match_recomputation():
    rng = np.random.default_rng(3)
    classes = ['pos', 'neg', 'non_lin']
    preds = rng.choice(classes, 200).tolist()
    golds = rng.choice(classes, 200).tolist()

    macro = multiclass_metrics(preds, golds, classes, average='macro')
    per_class_f1 = []
    for c in classes:
        tp, fp, fn, _ = brute_force_counts(preds, golds, c)
        p = tp / (tp + fp) if tp + fp else 0.0
        r = tp / (tp + fn) if tp + fn else 0.0
        per_class_f1.append(2 * p * r / (p + r) if p + r else 0.0)
    assert macro.f1 == pytest.approx(sum(per_class_f1) / 3, abs=1e-12)

    micro = multiclass_metrics(preds, golds, classes, average='micro', scored_classes=['neg', 'non_lin'])
    tp = sum(brute_force_counts(preds, golds, c)[0] for c in ['neg', 'non_lin'])
    fp = sum(brute_force_counts(preds, golds, c)[1] for c in ['neg', 'non_lin'])
    assert micro.precision == pytest.approx(tp / (tp + fp), abs=1e-12)


def test_array_predictions_and_absent_classes():
    preds = np.array(['pos', 'pos', 'neg', 'pos'])
    golds = ['pos', 'neg', 'neg', 'pos']
    metrics = multiclass_metrics(preds, golds, ['pos', 'neg', 'non_lin'], average='weighted')
    assert metrics.per_class['non_lin'].precision == 0.0
    assert metrics.per_class['non_lin'].support == 0
    assert metrics.per_class['pos'].precision == pytest.approx(2 / 3)
    assert metrics.per_class['neg'].recall == pytest.approx(0.5)
    assert metrics.accuracy == pytest.approx(0.75)

    nothing_positive = binary_metrics(np.zeros(5, dtype=int), [0, 0, 0, 0, 0])
    assert (nothing_positive.precision, nothing_positive.recall, nothing_positive.f1) == (0.0, 0.0, 0.0)
    assert binary_metrics([], []).support == 0


def test_kfold_singleton_and_even_folds():
    plan = kfold(10, 10, seed=1)
    assert sorted(len(f) for f in plan.folds()) == [1] * 10

    plan = kfold(1300, 10, seed=1)
    assert [len(f) for f in plan.folds()] == [130] * 10


@pytest.mark.parametrize("n,k", [(13, 2), (97, 10), (1300, 10), (21, 4)])
def test_folds_partition_range(n, k):
    plan = kfold(n, k, seed=5)
    folds = plan.folds()
    joined = np.concatenate(folds)
    assert sorted(joined.tolist()) == list(range(n))
    sizes = [len(f) for f in folds]
    assert max(sizes) - min(sizes) <= 1


def test_kfold_is_pure_function_of_seed():
    assert kfold(50, 5, seed=9) == kfold(50, 5, seed=9)
    assert kfold(50, 5, seed=9).assignments != kfold(50, 5, seed=10).assignments


def test_kfold_rejects_bad_sizes():
    with pytest.raises(FoldError):
        kfold(3, 10, seed=0)
    with pytest.raises(FoldError):
        kfold(10, 1, seed=0)


def test_stratified_plan_keeps_class_proportions():
    labels = ['A'] * 700 + ['B'] * 600
    plan = stratified_kfold(labels, 10, seed=2)
    for fold in plan.folds():
        a = sum(1 for i in fold if labels[i] == 'A')
        b = sum(1 for i in fold if labels[i] == 'B')
        assert abs(a - 70) <= 1
        assert abs(b - 60) <= 1


def test_stratified_plans_equal_brute_force_counting():
    rng = np.random.default_rng(4)
    for trial in range(100):
        k = int(rng.integers(2, 6))
        n = int(rng.integers(k, 80))
        labels = rng.integers(0, 3, n).tolist()
        plan = stratified_kfold(labels, k, seed=trial)
        assignments = plan.assignments
        assert sorted(np.concatenate(plan.folds()).tolist()) == list(range(n))
        for cls in set(labels):
            per_fold = [sum(1 for i in range(n) if labels[i] == cls and assignments[i] == f) for f in range(k)]
            assert max(per_fold) - min(per_fold) <= 1
        sizes = [assignments.count(f) for f in range(k)]
        assert max(sizes) - min(sizes) <= 1


def test_holdout_split_sizes_and_determinism():
    train, test = holdout_split(4, 0.75, seed=0)
    assert (len(train), len(test)) == (3, 1)

    train, test = holdout_split(1300, 0.75, seed=8)
    assert (len(train), len(test)) == (975, 325)
    assert set(train.tolist()).isdisjoint(test.tolist())
    assert sorted(train.tolist() + test.tolist()) == list(range(1300))

    again = holdout_split(1300, 0.75, seed=8)
    assert np.array_equal(train, again[0]) and np.array_equal(test, again[1])

    with pytest.raises(FoldError):
        holdout_split(1, 0.75, seed=0)
    with pytest.raises(FoldError):
        holdout_split(10, 1.0, seed=0)


def test_report_frame_has_table_columns(tmp_path):
    m = binary_metrics([1, 0, 1, 1], [1, 0, 0, 1])
    frame = metrics_frame([report_row('Logistic Regression', m, 'Stemming')])
    assert list(frame.columns) == REPORT_COLUMNS

    write_report(frame, tmp_path / 'report.csv')
    header = (tmp_path / 'report.csv').read_text(encoding='utf-8').splitlines()[0]
    assert header == 'Model,Feature Normalization,Accuracy,Precision,Recall,F1-Score'
