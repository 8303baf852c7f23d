"""
Hypothesis Reader - CLI and Pipeline Tests
"""

import json

import pytest
import torch
from click.testing import CliRunner

from src.cli.main import cli
from src.cli.pipeline import (RECORD_COLUMNS, HypothesisRecord, PipelineModels, RunConfig, deconstruct,
                              hypothesis_sort_key, load_models, run_pipeline, write_records_csv)
from src.cli.synth import (detector_records, linker_records, lookup_keys, sample_document, tagger_records,
                           vector_lines, write_synthetic_bundle)
from src.detector import DetectorConfig, LabeledSentence, save_detector, train_detector
from src.errors import ConfigError
from src.ingest import extract_candidates, segment_sentences
from src.ingest.documents import Document
from src.ingest.normalize import normalize_text
from src.lexicon.glove import load_glove
from src.linker import LinkerConfig, LinkExample, save_link_model, train_link_model
from src.serialization import read_container
from src.tagger import TaggerConfig, TagSequence, load_tagger, save_tagger, train_tagger

HEADER = 'file_name,hypothesis_num,hypothesis,variable_1,variable_2,direction,causal_relationship'


@pytest.fixture(scope='module')
def trained(tmp_path_factory):
    """Small models trained on synthetic data, saved to disk."""
    root = tmp_path_factory.mktemp('models')
    detector_data = [LabeledSentence(tuple(normalize_text(r['text'])), r['label'])
                     for r in detector_records(80, 80, seed=1)]
    detector = train_detector(detector_data, DetectorConfig(dim=16, epochs=15, seed=1))
    save_detector(detector, root / 'detector.bin')

    tag_data = [TagSequence(tuple(r['tokens']), tuple(r['tags'])) for r in tagger_records(40, seed=2)]
    texts = [' '.join(s.tokens) for s in tag_data] + [sample_document(seed=s) for s in range(3)]
    (root / 'vectors.txt').write_text('\n'.join(vector_lines(lookup_keys(texts), dim=8)) + '\n', encoding='utf-8')
    config = TaggerConfig(pad_len=20, lstm1_units=4, lstm2_units=6, epochs=2, batch_size=16, seed=2)
    save_tagger(train_tagger(tag_data, load_glove(root / 'vectors.txt'), config), root / 'tagger.bin')

    linker = train_link_model([LinkExample(**r) for r in linker_records(80, seed=3)], LinkerConfig(tune=False))
    save_link_model(linker, root / 'linker.bin')
    return root


def write_docs(directory, seeds=(0, 1)):
    directory.mkdir(parents=True, exist_ok=True)
    for seed in seeds:
        (directory / f'paper_{seed}.txt').write_text(sample_document(seed=seed), encoding='utf-8')
    return directory


def run_config(trained, input_dir, output, **overrides):
    values = dict(input_dir=input_dir, output=output, detector_path=trained / 'detector.bin',
                  tagger_path=trained / 'tagger.bin', linker_path=trained / 'linker.bin')
    values.update(overrides)
    return RunConfig(**values)


# ---------------------------------------------------------------- records

def test_hypothesis_numbers_sort_naturally():
    numbers = ['h_10', 'h_2', 'h_4b', 'h_4a', 'h_1', 'p_1']
    assert sorted(numbers, key=hypothesis_sort_key) == ['h_1', 'h_2', 'h_4a', 'h_4b', 'h_10', 'p_1']


def test_csv_header_and_quoting(tmp_path):
    record = HypothesisRecord('a.pdf', 'h_1', 'size, age and growth are related', 'size, age', 'growth',
                              'pos', 0)
    path = tmp_path / 'out.csv'
    write_records_csv([record], path)
    assert path.read_bytes() == (HEADER + '\na.pdf,h_1,"size, age and growth are related","size, age",'
                                 'growth,pos,0\n').encode('utf-8')


def test_csv_rejects_unknown_direction(tmp_path):
    with pytest.raises(ValueError):
        write_records_csv([HypothesisRecord('a', 'h_1', 'x', 'y', 'z', 'up', 0)], tmp_path / 'out.csv')


def test_record_columns_match_header():
    assert ','.join(RECORD_COLUMNS) == HEADER


# ---------------------------------------------------------------- pipeline

def test_empty_input_gives_header_only(trained, tmp_path):
    (tmp_path / 'docs').mkdir()
    summary = run_pipeline(run_config(trained, tmp_path / 'docs', tmp_path / 'out.csv'))
    assert (tmp_path / 'out.csv').read_text(encoding='utf-8') == HEADER + '\n'
    assert summary.ok and summary.documents == 0


def test_missing_model_file_is_reported(trained, tmp_path):
    (tmp_path / 'docs').mkdir()
    cfg = run_config(trained, tmp_path / 'docs', tmp_path / 'out.csv', linker_path=tmp_path / 'missing.bin')
    with pytest.raises(ConfigError):
        run_pipeline(cfg)


def test_runs_are_byte_identical_across_worker_counts(trained, tmp_path):
    docs = write_docs(tmp_path / 'docs', seeds=(0, 1, 2))
    run_pipeline(run_config(trained, docs, tmp_path / 'a.csv'))
    run_pipeline(run_config(trained, docs, tmp_path / 'b.csv'))
    run_pipeline(run_config(trained, docs, tmp_path / 'c.csv', workers=3))
    first = (tmp_path / 'a.csv').read_bytes()
    assert first == (tmp_path / 'b.csv').read_bytes() == (tmp_path / 'c.csv').read_bytes()
    assert first.startswith(HEADER.encode('utf-8') + b'\n')


def test_rows_are_sorted_and_valid(trained, tmp_path):
    docs = write_docs(tmp_path / 'docs', seeds=(3, 4))
    summary = run_pipeline(run_config(trained, docs, tmp_path / 'out.csv', threshold=0.0))
    keys = [(r.file_name, hypothesis_sort_key(r.hypothesis_num), r.sentence_index) for r in summary.records]
    assert keys == sorted(keys)
    assert all(r.direction in ('pos', 'neg', 'non_lin') for r in summary.records)
    assert all(r.causal_relationship in (0, 1) for r in summary.records)
    # threshold 0 keeps every candidate with a positive probability
    assert len(summary.records) >= 12


def test_failed_document_does_not_stop_the_batch(trained, tmp_path):
    docs = write_docs(tmp_path / 'docs', seeds=(0,))
    (docs / 'broken.txt').write_bytes(b'\xff\xfe\x00 not utf-8')
    rejected = tmp_path / 'rejected.jsonl'
    summary = run_pipeline(run_config(trained, docs, tmp_path / 'out.csv', dump_rejected=rejected))
    assert summary.failed == ['broken.txt']
    assert not summary.ok
    assert summary.documents == 2
    for line in rejected.read_text(encoding='utf-8').splitlines():
        assert json.loads(line)['doc_id'] == 'paper_0.txt'


def test_incomplete_records_are_kept(trained, caplog):
    models = load_models(run_config(trained, trained, trained / 'unused.csv'))
    tagger = load_tagger(trained / 'tagger.bin')
    with torch.no_grad():
        for p in tagger.network.parameters():
            if p.requires_grad:
                p.zero_()
    silent = PipelineModels(detector=models.detector, tagger=tagger, linker=models.linker)
    document = Document('x.txt', 'Hypothesis 1: Trust increases growth. H2: Age will reduce survival.')
    candidates = extract_candidates(segment_sentences(document))

    records = deconstruct(candidates, silent)
    assert [r.hypothesis_num for r in records] == ['h_1', 'h_2']
    assert records[0].hypothesis == 'trust increases growth'
    assert not any(r.complete for r in records)
    assert 'incomplete' in caplog.text


# ---------------------------------------------------------------- commands

def test_run_command_exit_codes(trained, tmp_path):
    docs = write_docs(tmp_path / 'docs', seeds=(0,))
    args = ['run', '--input', str(docs), '--output', str(tmp_path / 'out.csv'),
            '--detector', str(trained / 'detector.bin'), '--tagger', str(trained / 'tagger.bin'),
            '--linker', str(trained / 'linker.bin'), '--glove', str(trained / 'vectors.txt')]
    assert CliRunner().invoke(cli, args).exit_code == 0
    (docs / 'empty.txt').write_text('   \n', encoding='utf-8')
    assert CliRunner().invoke(cli, args).exit_code == 1
    assert (tmp_path / 'out.csv').read_text(encoding='utf-8').startswith(HEADER)


def test_train_detector_preset_echoed_in_header(tmp_path):
    bundle = write_synthetic_bundle(tmp_path / 'synth', seed=4, dim=4, n_tagger=10, n_linker=10)
    output = tmp_path / 'detector.bin'
    result = CliRunner().invoke(cli, ['train', 'detector', '--input', str(bundle['detector']),
                                      '--preset', 'p4', '--output', str(output)])
    assert result.exit_code == 0, result.output
    header, _ = read_container(output, b'HYPODETECT')
    config = header['config']
    assert (config['ngram'], config['lr'], config['dim'], config['loss']) == (1, 0.3, 120, 'negative_sampling')


def test_train_detector_reports_bad_line(tmp_path):
    data = tmp_path / 'bad.jsonl'
    data.write_text('{"text": "H1: A increases B.", "label": 1}\n{"text": "oops"\n', encoding='utf-8')
    result = CliRunner().invoke(cli, ['train', 'detector', '--input', str(data),
                                      '--output', str(tmp_path / 'm.bin')])
    assert result.exit_code == 1
    assert not (tmp_path / 'm.bin').exists()


def test_eval_with_too_many_folds_is_a_usage_error(tmp_path):
    data = tmp_path / 'small.jsonl'
    data.write_text(''.join(json.dumps(r) + '\n' for r in detector_records(3, 3, seed=0)), encoding='utf-8')
    result = CliRunner().invoke(cli, ['eval', 'detector', '--input', str(data), '--folds', '10'])
    assert result.exit_code == 2


def test_train_tagger_writes_epoch_log(tmp_path):
    bundle = write_synthetic_bundle(tmp_path / 'synth', seed=5, dim=4, n_tagger=12, n_linker=10)
    config = tmp_path / 'tagger.yaml'
    config.write_text('pad_len: 12\nlstm1_units: 2\nlstm2_units: 3\nepochs: 3\nbatch_size: 8\n', encoding='utf-8')
    log = tmp_path / 'epochs.csv'
    result = CliRunner().invoke(cli, ['train', 'tagger', '--input', str(bundle['tagger']),
                                      '--glove', str(bundle['vectors']), '--config', str(config),
                                      '--output', str(tmp_path / 'tagger.bin'), '--epoch-log', str(log)])
    assert result.exit_code == 0, result.output
    lines = log.read_text(encoding='utf-8').splitlines()
    assert lines[0] == 'epoch,train_acc,val_acc,train_loss'
    assert len(lines) == 4


def test_unknown_config_key_fails(tmp_path):
    bundle = write_synthetic_bundle(tmp_path / 'synth', seed=6, dim=4, n_tagger=10, n_linker=10)
    config = tmp_path / 'linker.yaml'
    config.write_text('reg_strength: 0.5\nlearning_rate: 3\n', encoding='utf-8')
    result = CliRunner().invoke(cli, ['train', 'linker', '--input', str(bundle['linker']),
                                      '--config', str(config), '--output', str(tmp_path / 'l.bin')])
    assert result.exit_code == 1


def test_synth_and_explain(tmp_path, trained):
    result = CliRunner().invoke(cli, ['synth', '--output', str(tmp_path / 'synth'), '--dim', '4',
                                      '--tagger-size', '5', '--linker-size', '5'])
    assert result.exit_code == 0
    assert (tmp_path / 'synth' / 'docs' / 'sample.txt').exists()

    out = tmp_path / 'explanation.json'
    result = CliRunner().invoke(cli, ['explain', '--model', str(trained / 'detector.bin'), '--text',
                                      'H1: Firm size is positively related to growth.', '--samples', '20',
                                      '--output', str(out), '--plot', str(tmp_path / 'bars.html')])
    assert result.exit_code == 0, result.output
    record = json.loads(out.read_text(encoding='utf-8'))
    assert {t['token'] for t in record['tokens']} == set(normalize_text('H1: Firm size is positively related '
                                                                        'to growth.'))
    assert (tmp_path / 'bars.html').exists()
