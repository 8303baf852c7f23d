"""
Hypothesis Reader - Detector Training Data
Labeled sentences from JSONL, or from candidate JSONL joined with a labels CSV.
"""

import json
import logging
from pathlib import Path
from typing import List, Union

import pandas as pd

from src.detector.model import LabeledSentence
from src.errors import DataFormatError
from src.ingest.candidates import read_candidates_jsonl
from src.ingest.normalize import normalize_text

logger = logging.getLogger(__name__)

PathLike = Union[str, Path]
LABEL_COLUMNS = ('doc_id', 'sentence_index', 'label')


def _check_label(value, path: PathLike, line_number: int) -> int:
    if isinstance(value, bool) or value not in (0, 1):
        raise DataFormatError(str(path), line_number, f"label must be 0 or 1, got {value!r}")
    return int(value)


def read_labeled_jsonl(path: PathLike) -> List[LabeledSentence]:
    """One {"text", "label"} object per line; text is normalized for the detector."""
    corpus = []
    with open(path, encoding='utf-8') as f:
        for line_number, line in enumerate(f, start=1):
            if not line.strip():
                continue
            try:
                record = json.loads(line)
                text, label = record['text'], record['label']
            except (json.JSONDecodeError, KeyError, TypeError) as e:
                raise DataFormatError(str(path), line_number, f"bad detector record: {e}") from e
            if not isinstance(text, str):
                raise DataFormatError(str(path), line_number, "text must be a string")
            corpus.append(LabeledSentence(tokens=tuple(normalize_text(text)),
                                          label=_check_label(label, path, line_number)))
    logger.info(f"Read {len(corpus)} labeled sentences from {path}")
    return corpus


def join_candidates_with_labels(candidates_path: PathLike, labels_path: PathLike) -> List[LabeledSentence]:
    """
    Attach labels from a CSV with columns doc_id, sentence_index, label to the
    candidates of an ``extract`` run. Candidates without a label are skipped.
    """
    candidates = read_candidates_jsonl(candidates_path)
    try:
        labels = pd.read_csv(labels_path, dtype={'doc_id': str})
    except (OSError, pd.errors.ParserError) as e:
        raise DataFormatError(str(labels_path), 0, f"cannot read labels: {e}") from e

    missing = [c for c in LABEL_COLUMNS if c not in labels.columns]
    if missing:
        raise DataFormatError(str(labels_path), 1, f"missing columns {missing}")

    lookup = {}
    for row_number, row in enumerate(labels.itertuples(index=False), start=2):
        lookup[(row.doc_id, int(row.sentence_index))] = _check_label(int(row.label), labels_path, row_number)

    corpus = []
    for candidate in candidates:
        label = lookup.get((candidate.doc_id, candidate.sentence.index))
        if label is None:
            continue
        corpus.append(LabeledSentence(tokens=tuple(normalize_text(candidate.text)), label=label))

    logger.info(f"Joined {len(corpus)} of {len(candidates)} candidates with labels")
    return corpus
