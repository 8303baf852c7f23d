#!/usr/bin/env python3
"""
Hypothesis Reader - Demo Runner
Deconstructs the seven published example hypotheses end to end.

The three models are trained on the gold example rows plus synthetic padding,
a document holding the hypotheses is written next to them and the pipeline
turns it back into the hypothesis table.
"""

import json
import logging
import os
import sys
import tempfile
from pathlib import Path
from typing import Dict, List, Optional, Union

from rich.console import Console
from rich.table import Table

# Add parent directory to path
sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.dirname(os.path.abspath(__file__)))))

from src.cli.pipeline import RECORD_COLUMNS, RunConfig, RunSummary, run_pipeline
from src.cli.synth import (INTRO_SENTENCES, detector_records, generate_discussion, linker_records,
                           lookup_keys, tagger_records, vector_lines)
from src.detector import LabeledSentence, parametrization, save_detector, train_detector
from src.ingest import normalize_text, surface_tokens
from src.lexicon import load_glove
from src.linker import LinkerConfig, LinkExample, save_link_model, train_link_model
from src.tagger import TaggerConfig, TagSequence, align_spans, save_tagger, train_tagger

logger = logging.getLogger(__name__)

ROWS_FILE = Path(__file__).resolve().parent / 'appendix_rows.json'
# The example document is plain text behind a .pdf name, so a pass-through extractor reads it
PASSTHROUGH_EXTRACTOR = 'cat {input}'
GOLD_REPEATS = 5

console = Console()


def load_appendix_rows(path: Union[str, Path] = ROWS_FILE) -> Dict:
    with open(path, encoding='utf-8') as f:
        return json.load(f)


def label_for(hypothesis_num: str) -> str:
    """'h_4a' -> 'Hypothesis 4a'."""
    return f"Hypothesis {hypothesis_num.split('_', 1)[1]}"


def hypothesis_sentence(row: Dict) -> str:
    body = row['hypothesis'].replace(' hr ', ' HR ')
    return f"{label_for(row['hypothesis_num'])}: {body[0].upper()}{body[1:]}."


def build_document(rows: List[Dict], seed: int = 0) -> str:
    """Introduction, the numbered hypotheses, then one results sentence."""
    sentences = list(INTRO_SENTENCES)
    sentences.extend(hypothesis_sentence(row) for row in rows)
    sentences.extend(generate_discussion(1, seed))
    return ' '.join(sentences) + '\n'


def gold_tag_sequences(rows: List[Dict]) -> List[TagSequence]:
    return [align_spans(surface_tokens(row['hypothesis']), row['variable_1'], row['variable_2']) for row in rows]


def train_demo_models(rows: List[Dict], model_dir: Path, seed: int = 7) -> Dict[str, Path]:
    """Train and save the detector, tagger and linker; returns their paths and the vector file."""
    model_dir.mkdir(parents=True, exist_ok=True)
    paths = {name: model_dir / f'{name}.bin' for name in ('detector', 'tagger', 'linker')}
    paths['vectors'] = model_dir / 'vectors.txt'

    detector_data = [LabeledSentence(tuple(normalize_text(r['text'])), r['label'])
                     for r in detector_records(300, 300, seed=seed)]
    # The results sentence of the document is trained as a non-hypothesis
    detector_data += [LabeledSentence(tuple(normalize_text(s)), 0) for s in generate_discussion(1, seed)]
    detector_data += [LabeledSentence(tuple(normalize_text(hypothesis_sentence(r))), 1)
                      for r in rows] * GOLD_REPEATS
    save_detector(train_detector(detector_data, parametrization(4, dim=32, epochs=10, seed=seed)),
                  paths['detector'])

    synthetic = [TagSequence(tuple(r['tokens']), tuple(r['tags'])) for r in tagger_records(150, seed=seed + 1)]
    tag_data = synthetic + gold_tag_sequences(rows) * GOLD_REPEATS
    texts = [' '.join(s.tokens) for s in tag_data] + [row['hypothesis'] for row in rows]
    paths['vectors'].write_text('\n'.join(vector_lines(lookup_keys(texts), dim=25, seed=seed)) + '\n',
                                encoding='utf-8')
    tagger_config = TaggerConfig(pad_len=40, spatial_dropout=0.1, recurrent_dropout=0.0, optimizer_lr=5e-3,
                                 epochs=30, validation_fraction=0.0, seed=seed)
    save_tagger(train_tagger(tag_data, load_glove(paths['vectors']), tagger_config), paths['tagger'])

    link_data = [LinkExample(**r) for r in linker_records(200, seed=seed + 2)]
    link_data += [LinkExample(text=hypothesis_sentence(r), causal=r['causal_relationship'],
                              direction=r['direction']) for r in rows] * GOLD_REPEATS
    save_link_model(train_link_model(link_data, LinkerConfig(tune=False, reg_strength=0.1, seed=seed)),
                    paths['linker'])
    return paths


def run_demo(workdir: Union[str, Path], seed: int = 7) -> RunSummary:
    """Write the example document, train the models and run the pipeline into ``workdir``."""
    workdir = Path(workdir)
    appendix = load_appendix_rows()
    rows = appendix['rows']

    docs = workdir / 'docs'
    docs.mkdir(parents=True, exist_ok=True)
    (docs / appendix['file_name']).write_text(build_document(rows, seed), encoding='utf-8')

    paths = train_demo_models(rows, workdir / 'models', seed)
    cfg = RunConfig(input_dir=docs, output=workdir / 'hypotheses.csv', detector_path=paths['detector'],
                    tagger_path=paths['tagger'], linker_path=paths['linker'], glove_path=paths['vectors'],
                    seed=seed, extractor=PASSTHROUGH_EXTRACTOR)
    return run_pipeline(cfg)


def print_header(title: str) -> None:
    console.rule(f"[bold]{title}")


def print_records(summary: RunSummary) -> None:
    table = Table(show_lines=True)
    for column in RECORD_COLUMNS:
        table.add_column(column, overflow='fold')
    for record in summary.records:
        row = record.row()
        table.add_row(*(str(row[column]) for column in RECORD_COLUMNS))
    console.print(table)


def main(workdir: Optional[str] = None) -> int:
    logging.basicConfig(level=logging.INFO, format='%(asctime)s - %(name)s - %(levelname)s - %(message)s')
    print_header("Hypothesis Reader - Published Example")
    if workdir is None:
        workdir = tempfile.mkdtemp(prefix='hypothesis-demo-')
    summary = run_demo(workdir)
    print_header("Deconstructed Data of Hypotheses")
    print_records(summary)
    console.print(f"CSV written to {Path(workdir) / 'hypotheses.csv'}")
    return 0 if summary.ok else 1


if __name__ == "__main__":
    sys.exit(main(sys.argv[1] if len(sys.argv) > 1 else None))
