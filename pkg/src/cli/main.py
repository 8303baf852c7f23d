#!/usr/bin/env python3
"""
Hypothesis Reader - Command Line Interface
Extracts, trains, evaluates, explains and runs the hypothesis pipeline.
"""

import json
import logging
import sys
from pathlib import Path
from typing import NoReturn, Optional

import click
from rich.console import Console
from rich.logging import RichHandler
from rich.table import Table

from src.config import Config, VALID_LOG_LEVELS, load_model_config
from src.errors import FoldError, HypothesisPipelineError

logger = logging.getLogger(__name__)

console = Console()
PRESETS = ('p1', 'p2', 'p3', 'p4')


def setup_logging(level: str) -> None:
    """Route every logger to stderr through rich."""
    handler = RichHandler(console=Console(stderr=True), show_path=False, rich_tracebacks=True)
    logging.basicConfig(level=getattr(logging, level.upper(), logging.INFO),
                        format='%(name)s - %(message)s', handlers=[handler], force=True)


def fail(error: HypothesisPipelineError) -> NoReturn:
    logger.error(f"{type(error).__name__}: {error}")
    sys.exit(1)


def print_metrics(title: str, rows) -> None:
    from src.evalkit.reports import metrics_frame, render_report
    render_report(metrics_frame(rows), title, console)


@click.group()
@click.option('--log-level', type=click.Choice(VALID_LOG_LEVELS, case_sensitive=False),
              default=Config.LOG_LEVEL if Config.LOG_LEVEL in VALID_LOG_LEVELS else 'INFO',
              show_default=True, help='Logging level (env HYPO_LOG_LEVEL).')
def cli(log_level: str):
    """Detect hypotheses in research papers and deconstruct them into cause, outcome and link."""
    setup_logging(log_level)
    if not Config.validate_config():
        raise click.UsageError("invalid HYPO_* environment configuration")


# ---------------------------------------------------------------- extract / stats

@cli.command()
@click.option('--input', 'input_dir', required=True, type=click.Path(exists=True, file_okay=False, path_type=Path),
              help='Directory of documents.')
@click.option('--output', required=True, type=click.Path(dir_okay=False, path_type=Path),
              help='Candidate JSONL to write.')
@click.option('--max-words', type=click.IntRange(min=1), default=Config.MAX_WORDS, show_default=True,
              help='Drop candidates longer than this many words.')
@click.option('--extractor', default=None, help='PDF-to-text command template with {input} (env HYPO_PDF_EXTRACTOR).')
def extract(input_dir: Path, output: Path, max_words: int, extractor: Optional[str]):
    """Write hypothesis candidates of every document to JSONL."""
    from src.ingest import (censor_by_length, extract_candidates, list_document_paths, load_document,
                            segment_sentences, write_candidates_jsonl)

    template = Config.extractor_command(extractor)
    candidates, failed = [], []
    try:
        paths = list_document_paths(input_dir, template)
    except HypothesisPipelineError as e:
        fail(e)
    for path in paths:
        try:
            sentences = segment_sentences(load_document(path, template))
        except HypothesisPipelineError as e:
            logger.error(f"Skipping {path.name}: {e}")
            failed.append(path.name)
            continue
        candidates.extend(censor_by_length(extract_candidates(sentences), max_words))

    write_candidates_jsonl(candidates, output)
    console.print(f"{len(candidates)} candidates from {len(paths) - len(failed)}/{len(paths)} documents")
    if failed:
        sys.exit(1)


@cli.command()
@click.option('--input', 'input_path', required=True, type=click.Path(exists=True, dir_okay=False, path_type=Path),
              help='Candidate JSONL from extract.')
@click.option('--plot', type=click.Path(dir_okay=False, path_type=Path), default=None,
              help='Write the word-count histogram as HTML.')
def stats(input_path: Path, plot: Optional[Path]):
    """Word-count distribution of extracted candidates."""
    from src.ingest import corpus_stats, read_candidates_jsonl

    try:
        result = corpus_stats(read_candidates_jsonl(input_path))
    except HypothesisPipelineError as e:
        fail(e)

    table = Table(title='Candidate sentences')
    table.add_column('Sentences', justify='right')
    table.add_column('Mean words', justify='right')
    table.add_column('SD', justify='right')
    table.add_row(str(result.sentence_count), f"{result.mean_words:.2f}", f"{result.sd_words:.2f}")
    console.print(table)

    if plot:
        from src.visualization import save_figure, word_count_histogram
        save_figure(word_count_histogram(result), plot)


# ---------------------------------------------------------------- train

@cli.group()
def train():
    """Train the detector, tagger or linker."""


def _detector_config(config_path: Optional[Path], preset: Optional[str], seed: Optional[int]):
    from src.detector import DetectorConfig, parametrization

    if config_path and preset:
        raise click.UsageError("--config and --preset are mutually exclusive")
    if preset:
        config = parametrization(PRESETS.index(preset) + 1)
    elif config_path:
        config = load_model_config(config_path, DetectorConfig)
    else:
        config = DetectorConfig()
    return config.model_copy(update={'seed': seed}) if seed is not None else config


@train.command('detector')
@click.option('--input', 'input_path', required=True, type=click.Path(exists=True, dir_okay=False, path_type=Path),
              help='Labeled JSONL ({"text", "label"}) or candidate JSONL with --labels.')
@click.option('--labels', type=click.Path(exists=True, dir_okay=False, path_type=Path), default=None,
              help='CSV with doc_id, sentence_index, label for a candidate JSONL.')
@click.option('--config', 'config_path', type=click.Path(exists=True, dir_okay=False, path_type=Path), default=None,
              help='YAML keys: ngram, lr, dim, loss, epochs, neg_samples, bucket_count, seed.')
@click.option('--preset', type=click.Choice(PRESETS), default=None, help='Published parametrization.')
@click.option('--seed', type=int, default=None, help='Overrides the config seed.')
@click.option('--output', required=True, type=click.Path(dir_okay=False, path_type=Path))
def train_detector_command(input_path, labels, config_path, preset, seed, output):
    """Train the hypothesis detector."""
    from src.detector import (evaluate_detector, join_candidates_with_labels, read_labeled_jsonl, save_detector,
                              train_detector)

    try:
        config = _detector_config(config_path, preset, seed)
        corpus = join_candidates_with_labels(input_path, labels) if labels else read_labeled_jsonl(input_path)
        model = train_detector(corpus, config)
        save_detector(model, output)
    except HypothesisPipelineError as e:
        fail(e)

    from src.evalkit.reports import report_row
    print_metrics('Detector (training data)', [report_row(f'Detector ({config.loss.value})',
                                                          evaluate_detector(model, corpus))])


@train.command('tagger')
@click.option('--input', 'input_path', required=True, type=click.Path(exists=True, dir_okay=False, path_type=Path),
              help='Tagger JSONL: {"tokens", "tags"} or {"text", "variable_1", "variable_2"}.')
@click.option('--glove', required=True, type=click.Path(exists=True, dir_okay=False, path_type=Path),
              help='Word vectors in GloVe text format.')
@click.option('--config', 'config_path', type=click.Path(exists=True, dir_okay=False, path_type=Path), default=None,
              help='YAML keys: pad_len, lstm1_units, lstm2_units, spatial_dropout, recurrent_dropout, '
                   'optimizer_lr, rho, epsilon, batch_size, epochs, validation_fraction, seed.')
@click.option('--seed', type=int, default=None, help='Overrides the config seed.')
@click.option('--output', required=True, type=click.Path(dir_okay=False, path_type=Path))
@click.option('--epoch-log', type=click.Path(dir_okay=False, path_type=Path), default=None,
              help='CSV with one row per epoch.')
@click.option('--plot', type=click.Path(dir_okay=False, path_type=Path), default=None,
              help='Training curve as HTML.')
def train_tagger_command(input_path, glove, config_path, seed, output, epoch_log, plot):
    """Train the cause/outcome node tagger."""
    from src.lexicon import load_glove
    from src.tagger import (TaggerConfig, evaluate_tagger, read_tagger_jsonl, save_tagger, train_tagger,
                            write_epoch_log)

    try:
        config = load_model_config(config_path, TaggerConfig) if config_path else TaggerConfig()
        if seed is not None:
            config = config.model_copy(update={'seed': seed})
        data = read_tagger_jsonl(input_path)
        model = train_tagger(data, load_glove(glove), config)
        save_tagger(model, output)
    except HypothesisPipelineError as e:
        fail(e)

    if epoch_log:
        write_epoch_log(model.epoch_log, epoch_log)
    if plot:
        from src.visualization import save_figure, training_curve
        save_figure(training_curve(model.epoch_log), plot)
    print_metrics('Tagger (training data)', _tagger_rows(evaluate_tagger(model, data)))


def _tagger_rows(metrics):
    from src.evalkit.metrics import Metrics
    from src.evalkit.reports import report_row

    rows = []
    for name, cls in (('Cause', '1'), ('Outcome', '2')):
        m = metrics.per_class[cls]
        rows.append(report_row(name, Metrics(metrics.accuracy, m.precision, m.recall, m.f1, m.support), 'GloVe'))
    rows.append(report_row('Overall', metrics, 'GloVe'))
    return rows


@train.command('linker')
@click.option('--input', 'input_path', required=True, type=click.Path(exists=True, dir_okay=False, path_type=Path),
              help='Linker JSONL: {"text", "causal", "direction"}.')
@click.option('--config', 'config_path', type=click.Path(exists=True, dir_okay=False, path_type=Path), default=None,
              help='YAML keys: max_n, min_count, reg_strength, grid, folds, repeats, tune, max_iter, seed.')
@click.option('--seed', type=int, default=None, help='Overrides the config seed.')
@click.option('--output', required=True, type=click.Path(dir_okay=False, path_type=Path))
def train_linker_command(input_path, config_path, seed, output):
    """Train the causality and direction classifiers, tuning the penalty when configured."""
    from src.linker import LinkerConfig, read_linker_jsonl, save_link_model, train_link_model, tune_and_train

    try:
        config = load_model_config(config_path, LinkerConfig) if config_path else LinkerConfig()
        if seed is not None:
            config = config.model_copy(update={'seed': seed})
        corpus = read_linker_jsonl(input_path)
        if config.tune:
            model, results = tune_and_train(corpus, config)
        else:
            model, results = train_link_model(corpus, config), {}
        save_link_model(model, output)
    except FoldError as e:
        raise click.UsageError(str(e))
    except HypothesisPipelineError as e:
        fail(e)

    for result in results.values():
        _print_tune_result(result)


# ---------------------------------------------------------------- eval

@cli.group('eval')
def evaluate():
    """Cross-validate or score a stage."""


@evaluate.command('detector')
@click.option('--input', 'input_path', required=True, type=click.Path(exists=True, dir_okay=False, path_type=Path))
@click.option('--labels', type=click.Path(exists=True, dir_okay=False, path_type=Path), default=None)
@click.option('--config', 'config_path', type=click.Path(exists=True, dir_okay=False, path_type=Path), default=None)
@click.option('--preset', type=click.Choice(PRESETS), default=None)
@click.option('--protocol', type=click.Choice(['kfold', 'holdout']), default='kfold', show_default=True)
@click.option('--folds', type=int, default=10, show_default=True)
@click.option('--seed', type=int, default=None)
@click.option('--threshold', type=click.FloatRange(0.0, 1.0), default=None,
              help='Decision threshold when scoring a trained model (needs --model).')
@click.option('--model', 'model_path', type=click.Path(exists=True, dir_okay=False, path_type=Path), default=None,
              help='Score a trained detector on the input instead of cross-validating.')
@click.option('--report', type=click.Path(dir_okay=False, path_type=Path), default=None,
              help='Also write the report as CSV or JSON.')
def eval_detector(input_path, labels, config_path, preset, protocol, folds, seed, threshold, model_path, report):
    """Cross-validated detector precision, recall and F-1."""
    from src.detector import (cross_validate_detector, evaluate_detector, join_candidates_with_labels,
                              load_detector, read_labeled_jsonl)
    from src.evalkit.reports import metrics_frame, report_row, write_report

    try:
        corpus = join_candidates_with_labels(input_path, labels) if labels else read_labeled_jsonl(input_path)
        if model_path:
            rows = [report_row('Detector', evaluate_detector(load_detector(model_path), corpus, threshold))]
        else:
            if threshold is not None:
                raise click.UsageError("--threshold needs --model")
            config = _detector_config(config_path, preset, seed)
            result = cross_validate_detector(corpus, config, k=folds, protocol=protocol)
            name = f'Detector ({config.loss.value})'
            rows = [report_row(f'{name} mean', result.mean), report_row(f'{name} pooled', result.pooled)]
    except FoldError as e:
        raise click.UsageError(str(e))
    except HypothesisPipelineError as e:
        fail(e)

    print_metrics('Hypothesis detection', rows)
    if report:
        write_report(metrics_frame(rows), report)


@evaluate.command('tagger')
@click.option('--input', 'input_path', required=True, type=click.Path(exists=True, dir_okay=False, path_type=Path))
@click.option('--model', 'model_path', type=click.Path(exists=True, dir_okay=False, path_type=Path), default=None,
              help='Score a trained tagger; without it a holdout split is trained with --glove.')
@click.option('--glove', type=click.Path(exists=True, dir_okay=False, path_type=Path), default=None)
@click.option('--config', 'config_path', type=click.Path(exists=True, dir_okay=False, path_type=Path), default=None)
@click.option('--seed', type=int, default=None)
@click.option('--report', type=click.Path(dir_okay=False, path_type=Path), default=None)
def eval_tagger(input_path, model_path, glove, config_path, seed, report):
    """Token-level cause and outcome precision, recall and F-1."""
    from src.evalkit.folds import holdout_split
    from src.evalkit.reports import metrics_frame, write_report
    from src.lexicon import load_glove
    from src.tagger import TaggerConfig, evaluate_tagger, load_tagger, read_tagger_jsonl, train_tagger

    try:
        data = read_tagger_jsonl(input_path)
        if model_path:
            metrics = evaluate_tagger(load_tagger(model_path), data)
        else:
            if glove is None:
                raise click.UsageError("either --model or --glove is required")
            config = load_model_config(config_path, TaggerConfig) if config_path else TaggerConfig()
            if seed is not None:
                config = config.model_copy(update={'seed': seed})
            train_ids, test_ids = holdout_split(len(data), 0.75, config.seed)
            model = train_tagger([data[i] for i in train_ids], load_glove(glove), config)
            metrics = evaluate_tagger(model, [data[i] for i in test_ids])
    except HypothesisPipelineError as e:
        fail(e)

    rows = _tagger_rows(metrics)
    print_metrics('Node tagging', rows)
    if report:
        write_report(metrics_frame(rows), report)


def _print_tune_result(result) -> None:
    table = Table(title=f'Linker tuning: {result.task.value}')
    table.add_column('Penalty', justify='right')
    table.add_column('Precision', justify='right')
    table.add_column('Recall', justify='right')
    table.add_column('F1-Score', justify='right')
    table.add_column('Best', justify='center')
    for point in result.points:
        m = point.metrics
        table.add_row(f"{point.reg_strength:g}", f"{m.precision * 100:.1f}%", f"{m.recall * 100:.1f}%",
                      f"{m.f1 * 100:.1f}%", '*' if point is result.best else '')
    console.print(table)


@evaluate.command('linker')
@click.option('--input', 'input_path', required=True, type=click.Path(exists=True, dir_okay=False, path_type=Path))
@click.option('--config', 'config_path', type=click.Path(exists=True, dir_okay=False, path_type=Path), default=None)
@click.option('--task', type=click.Choice(['causality', 'direction', 'both']), default='both', show_default=True)
@click.option('--folds', type=int, default=None, help='Overrides the config fold count.')
@click.option('--repeats', type=int, default=None, help='Overrides the config repeat count.')
@click.option('--seed', type=int, default=None)
@click.option('--report', type=click.Path(dir_okay=False, path_type=Path), default=None,
              help='Tuning results as JSON.')
def eval_linker(input_path, config_path, task, folds, repeats, seed, report):
    """Repeated stratified k-fold F-1 over the penalty grid."""
    from src.linker import (CAUSAL_CLASSES, DIRECTIONS, LinkerConfig, LinkTask, feature_matrix, link_tokens,
                            link_vocabulary, read_linker_jsonl)
    from src.linker.tuning import tune

    try:
        config = load_model_config(config_path, LinkerConfig) if config_path else LinkerConfig()
        overrides = {k: v for k, v in (('folds', folds), ('repeats', repeats), ('seed', seed)) if v is not None}
        config = config.model_copy(update=overrides)
        corpus = read_linker_jsonl(input_path)
        token_lists = [link_tokens(e.text) for e in corpus]
        X = feature_matrix(link_vocabulary(token_lists, config), token_lists)

        tasks = [LinkTask(task)] if task != 'both' else list(LinkTask)
        results = []
        for link_task in tasks:
            if link_task == LinkTask.CAUSALITY:
                y, classes = [e.causal for e in corpus], CAUSAL_CLASSES
            else:
                y, classes = [e.direction for e in corpus], DIRECTIONS
            results.append(tune(X, y, classes, link_task, config.grid, config.folds, config.repeats,
                                config.seed, config.max_iter))
    except FoldError as e:
        raise click.UsageError(str(e))
    except HypothesisPipelineError as e:
        fail(e)

    for result in results:
        _print_tune_result(result)
    if report:
        Path(report).write_text(json.dumps([r.to_dict() for r in results], indent=2) + '\n', encoding='utf-8')
        logger.info(f"Report written to {report}")


# ---------------------------------------------------------------- explain

@cli.command()
@click.option('--model', 'model_path', required=True, type=click.Path(exists=True, dir_okay=False, path_type=Path),
              help='Trained detector.')
@click.option('--text', required=True, help='Sentence to explain.')
@click.option('--samples', type=click.IntRange(min=0), default=200, show_default=True,
              help='Random perturbations on top of the leave-one-out set.')
@click.option('--seed', type=int, default=Config.SEED, show_default=True)
@click.option('--output', type=click.Path(dir_okay=False, path_type=Path), default=None,
              help='Explanation record as JSON.')
@click.option('--plot', type=click.Path(dir_okay=False, path_type=Path), default=None,
              help='Word-weight bar chart as HTML.')
def explain(model_path, text, samples, seed, output, plot):
    """Word-level weights behind one detector decision."""
    from src.detector import load_detector, predict
    from src.explainer import explain as explain_tokens
    from src.ingest import normalize_text

    try:
        model = load_detector(model_path)
        tokens = normalize_text(text)
        if not tokens:
            raise click.UsageError("the text has no content words to explain")
        explanation = explain_tokens(model, tokens, n_random=samples, seed=seed)
    except HypothesisPipelineError as e:
        fail(e)

    prediction = predict(model, tokens)
    table = Table(title=f'Hypothesis probability {explanation.model_prob:.3f} (fidelity {explanation.fidelity:.3f})')
    table.add_column('Word')
    table.add_column('Weight', justify='right')
    for token, weight in explanation.ranked():
        table.add_row(token, f"{weight:+.4f}")
    console.print(table)

    if output:
        record = explanation.to_record(text, {'label': prediction.label, 'prob': prediction.prob})
        Path(output).write_text(json.dumps(record, indent=2) + '\n', encoding='utf-8')
    if plot:
        from src.visualization import explanation_bars, save_figure
        save_figure(explanation_bars(explanation), plot)


# ---------------------------------------------------------------- synth / run

@cli.command()
@click.option('--output', required=True, type=click.Path(file_okay=False, path_type=Path))
@click.option('--seed', type=int, default=Config.SEED, show_default=True)
@click.option('--dim', type=click.IntRange(min=1), default=50, show_default=True, help='Word-vector size.')
@click.option('--tagger-size', type=click.IntRange(min=1), default=500, show_default=True)
@click.option('--linker-size', type=click.IntRange(min=1), default=500, show_default=True)
def synth(output, seed, dim, tagger_size, linker_size):
    """Write synthetic training corpora, word vectors and a sample document."""
    from src.cli.synth import write_synthetic_bundle

    paths = write_synthetic_bundle(output, seed=seed, dim=dim, n_tagger=tagger_size, n_linker=linker_size)
    for name, path in paths.items():
        console.print(f"{name}: {path}")


@cli.command()
@click.option('--input', 'input_dir', required=True, type=click.Path(path_type=Path), help='Directory of documents.')
@click.option('--output', required=True, type=click.Path(dir_okay=False, path_type=Path), help='Hypothesis CSV.')
@click.option('--detector', 'detector_path', required=True, type=click.Path(path_type=Path))
@click.option('--tagger', 'tagger_path', required=True, type=click.Path(path_type=Path))
@click.option('--linker', 'linker_path', required=True, type=click.Path(path_type=Path))
@click.option('--glove', 'glove_path', type=click.Path(path_type=Path), default=None,
              help='Check the tagger against this vector table.')
@click.option('--seed', type=int, default=Config.SEED, show_default=True)
@click.option('--threshold', type=click.FloatRange(0.0, 1.0), default=Config.THRESHOLD, show_default=True,
              help='Keep candidates whose hypothesis probability exceeds this.')
@click.option('--max-words', type=click.IntRange(min=1), default=Config.MAX_WORDS, show_default=True)
@click.option('--workers', type=click.IntRange(min=1), default=Config.WORKERS, show_default=True)
@click.option('--extractor', default=None, help='PDF-to-text command template with {input}.')
@click.option('--dump-rejected', type=click.Path(dir_okay=False, path_type=Path), default=None,
              help='JSONL of candidates the detector rejected.')
def run(input_dir, output, detector_path, tagger_path, linker_path, glove_path, seed, threshold, max_words,
        workers, extractor, dump_rejected):
    """Documents in, deconstructed hypothesis table out."""
    from src.cli.pipeline import RunConfig, run_pipeline

    cfg = RunConfig(input_dir=input_dir, output=output, detector_path=detector_path, tagger_path=tagger_path,
                    linker_path=linker_path, glove_path=glove_path, seed=seed, threshold=threshold,
                    max_words=max_words, workers=workers, extractor=extractor, dump_rejected=dump_rejected)
    try:
        summary = run_pipeline(cfg)
    except HypothesisPipelineError as e:
        fail(e)

    console.print(f"{len(summary.records)} hypotheses from {summary.documents - len(summary.failed)}/"
                  f"{summary.documents} documents written to {output}")
    if not summary.ok:
        sys.exit(1)


def main():
    cli(prog_name='hypothesis-reader')


if __name__ == '__main__':
    main()
