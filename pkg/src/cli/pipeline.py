"""
Hypothesis Reader - Pipeline
Runs documents through extraction, detection, node tagging and link
classification and writes the deconstructed hypothesis table.
"""

import json
import logging
import re
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import List, Optional, Sequence, Tuple, Union

import pandas as pd
from pydantic import BaseModel, ConfigDict, Field

from src.config import Config
from src.detector.model import DetectorModel, load_detector
from src.errors import ConfigError, DimensionMismatch, HypothesisPipelineError
from src.ingest.candidates import (CandidateSentence, candidate_record, censor_by_length, extract_candidates,
                                   hypothesis_body)
from src.ingest.documents import list_document_paths, load_document
from src.ingest.normalize import normalize_text
from src.ingest.segmenter import segment_sentences, surface_tokens
from src.lexicon.glove import load_glove
from src.linker.model import DIRECTIONS, LinkModel, load_link_model
from src.tagger.data import decode_spans
from src.tagger.model import TaggerModel, load_tagger, tag_many

logger = logging.getLogger(__name__)

RECORD_COLUMNS = ['file_name', 'hypothesis_num', 'hypothesis', 'variable_1', 'variable_2', 'direction',
                  'causal_relationship']
NUMBER_RE = re.compile(r'^(?P<prefix>[a-z]+)_(?P<num>\d+)(?P<suffix>[a-z]*)$')


class RunConfig(BaseModel):
    """Inputs, trained models and knobs of one ``run``."""

    model_config = ConfigDict(extra='forbid', frozen=True)

    input_dir: Path
    output: Path
    detector_path: Path
    tagger_path: Path
    linker_path: Path
    glove_path: Optional[Path] = None
    seed: int = Config.SEED
    threshold: float = Field(default=Config.THRESHOLD, ge=0.0, le=1.0)
    max_words: int = Field(default=Config.MAX_WORDS, ge=1)
    workers: int = Field(default=Config.WORKERS, ge=1)
    extractor: Optional[str] = None
    dump_rejected: Optional[Path] = None

    def check_paths(self) -> None:
        """Every referenced input must exist before any document is read."""
        for name in ('detector_path', 'tagger_path', 'linker_path', 'glove_path'):
            path = getattr(self, name)
            if path is not None and not path.is_file():
                raise ConfigError(f"{name.replace('_path', '')} file {path} does not exist")
        if not self.input_dir.is_dir():
            raise ConfigError(f"input directory {self.input_dir} does not exist")


@dataclass(frozen=True)
class HypothesisRecord:
    file_name: str
    hypothesis_num: str
    hypothesis: str
    variable_1: str
    variable_2: str
    direction: str
    causal_relationship: int
    sentence_index: int = field(default=0, compare=False)

    @property
    def complete(self) -> bool:
        return bool(self.variable_1) and bool(self.variable_2)

    def row(self) -> dict:
        record = asdict(self)
        record.pop('sentence_index')
        return record


@dataclass(frozen=True)
class PipelineModels:
    detector: DetectorModel
    tagger: TaggerModel
    linker: LinkModel


@dataclass
class DocumentResult:
    file_name: str
    records: List[HypothesisRecord] = field(default_factory=list)
    rejected: List[dict] = field(default_factory=list)
    error: Optional[str] = None


@dataclass
class RunSummary:
    records: List[HypothesisRecord]
    documents: int
    failed: List[str]
    rejected: int

    @property
    def ok(self) -> bool:
        return not self.failed


def load_models(cfg: RunConfig) -> PipelineModels:
    models = PipelineModels(
        detector=load_detector(cfg.detector_path),
        tagger=load_tagger(cfg.tagger_path),
        linker=load_link_model(cfg.linker_path),
    )
    if cfg.glove_path is not None:
        table = load_glove(cfg.glove_path)
        if table.dim != models.tagger.index.dim:
            raise DimensionMismatch(f"{cfg.glove_path} has {table.dim}-d vectors, "
                                    f"the tagger was trained on {models.tagger.index.dim}-d vectors")
    return models


def hypothesis_sort_key(number: str) -> Tuple:
    """Natural order of hypothesis numbers: h_2 before h_10, h_4a before h_4b."""
    match = NUMBER_RE.match(number)
    if match is None:
        return (number, 0, '')
    return (match.group('prefix'), int(match.group('num')), match.group('suffix'))


def record_sort_key(record: HypothesisRecord) -> Tuple:
    return (record.file_name, hypothesis_sort_key(record.hypothesis_num), record.sentence_index)


def deconstruct(candidates: Sequence[CandidateSentence], models: PipelineModels) -> List[HypothesisRecord]:
    """Tag and link accepted hypotheses; the result follows candidate order."""
    bodies = [hypothesis_body(c) for c in candidates]
    token_lists = [surface_tokens(body) for body in bodies]
    taggable = [i for i, tokens in enumerate(token_lists) if tokens]
    tagged = dict(zip(taggable, tag_many(models.tagger, [token_lists[i] for i in taggable])))

    records = []
    for i, candidate in enumerate(candidates):
        spans = decode_spans(tagged[i]) if i in tagged else None
        link = models.linker.predict(candidate.text)
        record = HypothesisRecord(
            file_name=candidate.doc_id,
            hypothesis_num=candidate.hypothesis_num,
            hypothesis=bodies[i],
            variable_1=spans.variable_1 if spans else '',
            variable_2=spans.variable_2 if spans else '',
            direction=link.direction,
            causal_relationship=int(link.causal),
            sentence_index=candidate.sentence.index,
        )
        if not record.complete:
            logger.warning(f"incomplete: {record.file_name} {record.hypothesis_num} has an empty variable "
                           f"(variable_1='{record.variable_1}', variable_2='{record.variable_2}')")
        records.append(record)
    return records


def process_document(path: Path, models: PipelineModels, cfg: RunConfig) -> DocumentResult:
    """One document end to end. Pipeline errors are captured on the result, never raised."""
    result = DocumentResult(file_name=path.name)
    try:
        document = load_document(path, Config.extractor_command(cfg.extractor))
        candidates = censor_by_length(extract_candidates(segment_sentences(document)), cfg.max_words)

        accepted = []
        for candidate in candidates:
            prob = models.detector.hypothesis_prob(normalize_text(candidate.text))
            if prob > cfg.threshold:
                accepted.append(candidate)
            else:
                result.rejected.append({**candidate_record(candidate), 'hypothesis_prob': prob})

        result.records = deconstruct(accepted, models)
        logger.info(f"{path.name}: {len(candidates)} candidates, {len(accepted)} hypotheses")
    except HypothesisPipelineError as e:
        logger.error(f"Skipping {path.name}: {e}")
        result.error = str(e)
    return result


def write_records_csv(records: Sequence[HypothesisRecord], path: Union[str, Path]) -> None:
    """Header always present; minimal quoting and LF line endings."""
    for record in records:
        if record.direction not in DIRECTIONS or record.causal_relationship not in (0, 1):
            raise ValueError(f"invalid record for {record.file_name} {record.hypothesis_num}")
    frame = pd.DataFrame([r.row() for r in records], columns=RECORD_COLUMNS)
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    frame.to_csv(path, index=False, lineterminator='\n', encoding='utf-8')


def write_rejected_jsonl(rejected: Sequence[dict], path: Union[str, Path]) -> None:
    with open(path, 'w', encoding='utf-8', newline='\n') as f:
        for record in rejected:
            f.write(json.dumps(record, ensure_ascii=False, sort_keys=True) + '\n')
    logger.info(f"Wrote {len(rejected)} rejected candidates to {path}")


def run_pipeline(cfg: RunConfig, models: Optional[PipelineModels] = None) -> RunSummary:
    """
    Process every document of ``cfg.input_dir`` and write the hypothesis CSV.

    Documents are handled by ``cfg.workers`` threads sharing read-only models.
    Rows are sorted by file name, hypothesis number and sentence position
    before writing, so the output does not depend on scheduling.
    """
    cfg.check_paths()
    models = models or load_models(cfg)
    paths = list_document_paths(cfg.input_dir, Config.extractor_command(cfg.extractor))
    logger.info(f"Processing {len(paths)} documents from {cfg.input_dir} with {cfg.workers} worker(s)")

    if cfg.workers > 1 and len(paths) > 1:
        with ThreadPoolExecutor(max_workers=cfg.workers) as pool:
            results = list(pool.map(lambda p: process_document(p, models, cfg), paths))
    else:
        results = [process_document(p, models, cfg) for p in paths]

    records = sorted((r for result in results for r in result.records), key=record_sort_key)
    rejected = [r for result in results for r in result.rejected]
    failed = [result.file_name for result in results if result.error is not None]

    write_records_csv(records, cfg.output)
    if cfg.dump_rejected is not None:
        write_rejected_jsonl(rejected, cfg.dump_rejected)

    logger.info(f"Wrote {len(records)} hypotheses to {cfg.output}; {len(failed)} document(s) failed")
    return RunSummary(records=records, documents=len(paths), failed=failed, rejected=len(rejected))
