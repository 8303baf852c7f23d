"""
Hypothesis Reader - Tagger Tests
"""

import numpy as np
import pandas as pd
import pytest
import torch

from src.cli.synth import generate_hypotheses, lookup_keys, vector_lines
from src.errors import EmptyCorpus, InvalidTag, MisalignedInput
from src.evalkit.folds import holdout_split
from src.lexicon.glove import WordVectorTable
from src.tagger.config import TaggerConfig
from src.tagger.data import EmbeddingIndex, TagSequence, align_spans, decode_spans, pad_or_truncate
from src.tagger.model import (encode, load_tagger, per_class_metrics, save_tagger, tag, tag_many, train_tagger,
                              write_epoch_log)
from src.tagger.network import BiLSTMTagger, masked_cross_entropy

ROW_3 = "performance-enhancing practices will be positively related to both quit rates and dismissal rates"
ROW_7 = "the hr performance relationship will be mediated by the additive effect of quit rates and dismissal rates"


def table_for(sentences, dim=4, seed=0):
    keys = lookup_keys(' '.join(s) for s in sentences)
    rng = np.random.default_rng(seed)
    return WordVectorTable.from_pairs([(k, rng.normal(size=dim).tolist()) for k in keys])


def tiny_config(**overrides):
    values = dict(pad_len=8, lstm1_units=2, lstm2_units=3, epochs=2, batch_size=4, seed=3)
    values.update(overrides)
    return TaggerConfig(**values)


def toy_data():
    return [
        TagSequence(('trust', 'increases', 'growth'), (1, 0, 2)),
        TagSequence(('firm', 'size', 'will', 'reduce', 'survival'), (1, 1, 0, 0, 2)),
        TagSequence(('age', 'increases', 'market', 'share'), (1, 0, 2, 2)),
        TagSequence(('slack', 'reduces', 'growth'), (1, 0, 2)),
    ]


def toy_network(config, seed=0, dim=4, vocab=6):
    torch.manual_seed(seed)
    rng = np.random.default_rng(seed)
    index = EmbeddingIndex([f"w{i}" for i in range(vocab)], rng.normal(size=(vocab, dim)))
    return index, BiLSTMTagger(index.matrix, config)


# ---------------------------------------------------------------- padding

def test_pad_or_truncate_boundaries():
    assert list(pad_or_truncate([5, 6, 7], 50)) == [5, 6, 7] + [0] * 47
    assert list(pad_or_truncate(list(range(1, 51)), 50)) == list(range(1, 51))
    assert list(pad_or_truncate(list(range(1, 59)), 50)) == list(range(1, 51))
    with pytest.raises(ValueError):
        pad_or_truncate([1], 0)


def test_embedding_index_reserves_pad_and_oov_rows():
    index = EmbeddingIndex.from_table(WordVectorTable.from_pairs([('firm', [1.0, 2.0])]))
    assert index.row('Firm,') == 2
    assert index.row('unknown') == 1
    assert np.array_equal(index.matrix[0], [0, 0]) and np.array_equal(index.matrix[1], [0, 0])


# ---------------------------------------------------------------- forward pass

def test_zero_weights_give_uniform_probabilities():
    index, network = toy_network(tiny_config())
    with torch.no_grad():
        for p in network.parameters():
            if p.requires_grad:
                p.zero_()
    probs = network(torch.as_tensor(index.encode(['w0', 'w1', 'zzz'], 8)).unsqueeze(0))
    assert torch.allclose(probs, torch.full_like(probs, 1 / 3))


def test_probabilities_are_normalized():
    index, network = toy_network(tiny_config())
    x = torch.as_tensor(np.stack([index.encode(['w1', 'w2', 'w3'], 8), index.encode(['w4'] * 8, 8)]))
    sums = network(x).sum(dim=-1)
    assert torch.allclose(sums, torch.ones_like(sums), atol=1e-6)


def reference_lstm(x, cell, reverse=False):
    """Plain numpy LSTM; gate order input, forget, cell, output."""
    w_ih = cell.weight_ih.detach().numpy()
    w_hh = cell.weight_hh.detach().numpy()
    b = cell.bias_ih.detach().numpy() + cell.bias_hh.detach().numpy()
    units = w_hh.shape[1]
    h, c = np.zeros(units), np.zeros(units)
    sigmoid = lambda z: 1.0 / (1.0 + np.exp(-z))
    outputs = [None] * len(x)
    steps = range(len(x) - 1, -1, -1) if reverse else range(len(x))
    for t in steps:
        z = w_ih @ x[t] + w_hh @ h + b
        i, f, g, o = np.split(z, 4)
        c = sigmoid(f) * c + sigmoid(i) * np.tanh(g)
        h = sigmoid(o) * np.tanh(c)
        outputs[t] = h
    return np.stack(outputs)


def test_forward_matches_reference_lstm():
    config = tiny_config(pad_len=2)
    index, network = toy_network(config)
    network.double()
    x = index.encode(['w0', 'w3'], 2)
    emb = network.embedding.weight.detach().numpy()[x]
    layer1 = np.concatenate([reference_lstm(emb, network.lstm1_fw.cell),
                             reference_lstm(emb, network.lstm1_bw.cell, reverse=True)], axis=1)
    layer2 = np.concatenate([reference_lstm(layer1, network.lstm2_fw.cell),
                             reference_lstm(layer1, network.lstm2_bw.cell, reverse=True)], axis=1)
    logits = layer2 @ network.dense.weight.detach().numpy().T + network.dense.bias.detach().numpy()
    expected = np.exp(logits) / np.exp(logits).sum(axis=1, keepdims=True)
    actual = network(torch.as_tensor(x).unsqueeze(0))[0].detach().numpy()
    assert np.max(np.abs(actual - expected)) < 1e-10


def test_padding_never_reaches_real_positions():
    index, network = toy_network(tiny_config(pad_len=4))
    tokens = ['w1', 'w2', 'w5']
    short = network(torch.as_tensor(index.encode(tokens, 4)).unsqueeze(0))[0, :3]
    long = network(torch.as_tensor(index.encode(tokens, 7)).unsqueeze(0))[0, :3]
    assert torch.allclose(short, long, atol=1e-7)


def test_loss_ignores_tags_at_padding():
    index, network = toy_network(tiny_config())
    x = torch.as_tensor(index.encode(['w1', 'w2'], 8)).unsqueeze(0)
    mask = x != 0
    tags_a = torch.zeros_like(x)
    tags_b = tags_a.clone()
    tags_b[0, 5] = 2
    logits = network.logits(x)
    assert masked_cross_entropy(logits, tags_a, mask).item() == masked_cross_entropy(logits, tags_b, mask).item()


def test_gradients_match_finite_differences():
    config = tiny_config(pad_len=5)
    index, network = toy_network(config)
    network.double()
    x = torch.as_tensor(np.stack([index.encode(['w0', 'w2', 'w4'], 5), index.encode(['w1', 'w3', 'w5', 'w0'], 5)]))
    y = torch.as_tensor([[1, 0, 2, 0, 0], [0, 1, 1, 2, 0]])
    mask = x != 0

    loss = masked_cross_entropy(network.logits(x), y, mask)
    params = [(n, p) for n, p in network.named_parameters() if p.requires_grad]
    analytic = torch.autograd.grad(loss, [p for _, p in params])

    eps = 1e-6
    for (name, param), grad in zip(params, analytic):
        numeric = torch.zeros_like(param)
        flat, numeric_flat = param.data.view(-1), numeric.view(-1)
        for i in range(flat.numel()):
            original = flat[i].item()
            flat[i] = original + eps
            with torch.no_grad():
                plus = masked_cross_entropy(network.logits(x), y, mask).item()
            flat[i] = original - eps
            with torch.no_grad():
                minus = masked_cross_entropy(network.logits(x), y, mask).item()
            flat[i] = original
            numeric_flat[i] = (plus - minus) / (2 * eps)
        error = (grad - numeric).norm() / max((grad.norm() + numeric.norm()).item(), 1e-12)
        assert error < 1e-4, name


# ---------------------------------------------------------------- tagging and decoding

def test_zero_weight_model_tags_everything_as_non_node():
    model = train_tagger(toy_data(), table_for([s.tokens for s in toy_data()]), tiny_config(epochs=1))
    with torch.no_grad():
        for p in model.network.parameters():
            if p.requires_grad:
                p.zero_()
    assert tag(model, ['trust', 'increases', 'growth']).tags == (0, 0, 0)


def test_tokens_beyond_pad_len_are_non_nodes():
    model = train_tagger(toy_data(), table_for([s.tokens for s in toy_data()]), tiny_config(epochs=1))
    tokens = ['trust'] * 11
    result = tag(model, tokens)
    assert len(result.tags) == 11 and result.tags[8:] == (0, 0, 0)
    assert tag(model, tokens) == result
    with pytest.raises(ValueError):
        tag(model, [])


def test_decode_published_row():
    tokens = ROW_3.split()
    sequence = align_spans(tokens, "performance-enhancing practices", "quit rates and dismissal rates")
    spans = decode_spans(sequence)
    assert spans.variable_1 == "performance-enhancing practices"
    assert spans.variable_2 == "quit rates and dismissal rates"


def test_decode_edge_cases():
    assert decode_spans(TagSequence(('a', 'b'), (0, 0))).complete is False
    spans = decode_spans(TagSequence(('b', 'x', 'a'), (2, 0, 1)))
    assert (spans.variable_1, spans.variable_2) == ('a', 'b')
    spans = decode_spans(TagSequence(('quit', 'rates', 'hurt', 'operational', 'performance:'), (1, 1, 0, 2, 2)))
    assert spans.variable_2 == 'operational performance'


def test_decode_keeps_class_tokens_in_order():
    rng = np.random.default_rng(5)
    tokens = tuple(f"t{i}" for i in range(30))
    tags = tuple(int(t) for t in rng.integers(0, 3, size=30))
    spans = decode_spans(TagSequence(tokens, tags))
    assert spans.variable_1.split() == [t for t, g in zip(tokens, tags) if g == 1]
    assert spans.variable_2.split() == [t for t, g in zip(tokens, tags) if g == 2]


def test_align_outcome_before_cause():
    sequence = align_spans(ROW_7.split(), "effect of quit rates and dismissal rates", "hr performance")
    assert sequence.tags[1:3] == (2, 2)
    assert decode_spans(sequence).variable_1 == "effect of quit rates and dismissal rates"
    with pytest.raises(MisalignedInput):
        align_spans(['a', 'b'], 'c', 'b')


def test_tag_sequence_validation():
    with pytest.raises(InvalidTag):
        TagSequence(('a',), (3,))
    with pytest.raises(MisalignedInput):
        TagSequence(('a', 'b'), (0,))


# ---------------------------------------------------------------- metrics

def test_perfect_predictions_score_one():
    metrics = per_class_metrics(toy_data(), toy_data())
    assert metrics.f1 == 1.0 and metrics.accuracy == 1.0
    assert all(m.f1 == 1.0 for m in metrics.per_class.values())


def test_metrics_match_confusion_matrix():
    rng = np.random.default_rng(11)
    golds, preds = [], []
    for length in [40, 60, 50, 50]:
        tokens = tuple('w' for _ in range(length))
        golds.append(TagSequence(tokens, tuple(int(t) for t in rng.integers(0, 3, length))))
        preds.append(TagSequence(tokens, tuple(int(t) for t in rng.integers(0, 3, length))))
    g = np.concatenate([s.tags for s in golds])
    p = np.concatenate([s.tags for s in preds])
    confusion = np.zeros((3, 3), dtype=int)
    for gi, pi in zip(g, p):
        confusion[gi, pi] += 1

    metrics = per_class_metrics(preds, golds)
    for cls in range(3):
        tp = confusion[cls, cls]
        assert metrics.per_class[str(cls)].precision == pytest.approx(tp / confusion[:, cls].sum())
        assert metrics.per_class[str(cls)].recall == pytest.approx(tp / confusion[cls].sum())
    tp = confusion[1, 1] + confusion[2, 2]
    assert metrics.precision == pytest.approx(tp / confusion[:, 1:].sum())
    assert metrics.recall == pytest.approx(tp / confusion[1:].sum())
    assert metrics.accuracy == pytest.approx(np.trace(confusion) / confusion.sum())


def test_misaligned_metrics_inputs():
    with pytest.raises(MisalignedInput):
        per_class_metrics(toy_data()[:2], toy_data())


# ---------------------------------------------------------------- training

def test_training_errors():
    with pytest.raises(EmptyCorpus):
        train_tagger([], table_for([['a']]), tiny_config())


def test_training_restores_deterministic_algorithms_flag():
    assert not torch.are_deterministic_algorithms_enabled()
    train_tagger(toy_data(), table_for([s.tokens for s in toy_data()]), tiny_config(epochs=1))
    assert not torch.are_deterministic_algorithms_enabled()

    torch.use_deterministic_algorithms(True)
    try:
        train_tagger(toy_data(), table_for([s.tokens for s in toy_data()]), tiny_config(epochs=1))
        assert torch.are_deterministic_algorithms_enabled()
    finally:
        torch.use_deterministic_algorithms(False)


def test_training_is_deterministic_and_round_trips(tmp_path):
    data = toy_data() * 3
    table = table_for([s.tokens for s in data])
    first = train_tagger(data, table, tiny_config(epochs=3))
    second = train_tagger(data, table, tiny_config(epochs=3))
    save_tagger(first, tmp_path / 'a.bin')
    save_tagger(second, tmp_path / 'b.bin')
    assert (tmp_path / 'a.bin').read_bytes() == (tmp_path / 'b.bin').read_bytes()

    restored = load_tagger(tmp_path / 'a.bin')
    sentences = [s.tokens for s in data[:4]] + [('unseen', 'words', 'here')]
    assert tag_many(restored, sentences) == tag_many(first, sentences)
    assert restored.epoch_log == first.epoch_log


def test_epoch_log_csv(tmp_path):
    data = toy_data() * 3
    model = train_tagger(data, table_for([s.tokens for s in data]), tiny_config(epochs=4))
    path = tmp_path / 'epochs.csv'
    write_epoch_log(model.epoch_log, path)
    frame = pd.read_csv(path)
    assert list(frame.columns) == ['epoch', 'train_acc', 'val_acc', 'train_loss']
    assert frame['epoch'].tolist() == [1, 2, 3, 4]
    assert frame['train_acc'].between(0, 1).all()


def test_encode_pads_tags_with_zero():
    data = toy_data()
    index = EmbeddingIndex.from_table(table_for([s.tokens for s in data]))
    x, y = encode(index, data, 6)
    assert x.shape == y.shape == (4, 6)
    assert y[0].tolist() == [1, 0, 2, 0, 0, 0]
    assert (x[0, 3:] == 0).all()


@pytest.mark.slow
def test_synthetic_corpus_reaches_target_scores():
    hypotheses = generate_hypotheses(500, seed=10)
    data = [TagSequence(h.tokens, h.tags) for h in hypotheses]
    keys = lookup_keys(' '.join(h.tokens) for h in hypotheses)
    table = WordVectorTable.from_pairs([(line.split(' ')[0], [float(v) for v in line.split(' ')[1:]])
                                        for line in vector_lines(keys, dim=50, seed=0)])
    train_ids, test_ids = holdout_split(len(data), 0.8, seed=1)
    model = train_tagger([data[i] for i in train_ids], table, TaggerConfig(seed=1))
    assert len(model.epoch_log) == 50

    metrics = per_class_metrics(tag_many(model, [data[i].tokens for i in test_ids]), [data[i] for i in test_ids])
    assert metrics.per_class['1'].f1 >= 0.85
    assert metrics.per_class['2'].f1 >= 0.85
    assert metrics.accuracy >= 0.95
    assert tag(model, ['trust', 'increases', 'growth']).tags == (1, 0, 2)
