"""
Hypothesis Reader - Candidate Extraction
Finds sentences mentioning a hypothesis or proposition label, censors long
ones and carries them to and from JSONL.
"""

import json
import logging
import re
from dataclasses import dataclass
from enum import Enum
from pathlib import Path
from typing import Iterable, List, Optional, Tuple, Union

from src.errors import DataFormatError
from src.ingest.segmenter import Sentence, make_sentence

logger = logging.getLogger(__name__)

TRIGGER_RE = re.compile(
    r'\b(?:(?P<long>hypothesis|proposition)\s*[-.:#]?\s*|(?P<short>h|p)[-.:#]?)'
    r'(?P<num>\d+)(?P<suffix>[a-z])?(?![a-z0-9])',
    re.IGNORECASE,
)
LEADING_LABEL_RE = re.compile(
    r'^[\s\"\'“‘(\[]*(?:hypothesis|proposition|h|p)\s*[-.:#]?\s*\d+[a-z]?(?![a-z0-9])[\s.:)\]\-–—]*',
    re.IGNORECASE,
)
HYPOTHESIS_NUM_RE = re.compile(r'^[hp]_[0-9]+[a-z]?$')
TRAILING_RE = re.compile(r'[\s.!?;:,\"\'”’)\]]+$')
WHITESPACE_RE = re.compile(r'\s+')

MERGE_MIN_TOKENS = 4
MERGE_MAX_SENTENCES = 3


class TriggerKind(str, Enum):
    HYPOTHESIS = 'hypothesis'
    PROPOSITION = 'proposition'
    H_SHORT = 'h_short'
    P_SHORT = 'p_short'


@dataclass(frozen=True)
class CandidateSentence:
    sentence: Sentence
    trigger_kind: TriggerKind
    hypothesis_num: str
    word_count: int

    @property
    def doc_id(self) -> str:
        return self.sentence.doc_id

    @property
    def text(self) -> str:
        return self.sentence.text


def match_trigger(text: str) -> Optional[Tuple[TriggerKind, str]]:
    """Trigger kind and normalized number ("H4a:" -> "h_4a") of the first label in ``text``."""
    match = TRIGGER_RE.search(text)
    if match is None:
        return None

    if match.group('long'):
        word = match.group('long').lower()
        kind = TriggerKind.HYPOTHESIS if word == 'hypothesis' else TriggerKind.PROPOSITION
    else:
        kind = TriggerKind.H_SHORT if match.group('short').lower() == 'h' else TriggerKind.P_SHORT

    prefix = 'h' if kind in (TriggerKind.HYPOTHESIS, TriggerKind.H_SHORT) else 'p'
    suffix = (match.group('suffix') or '').lower()
    return kind, f"{prefix}_{int(match.group('num'))}{suffix}"


def word_count(text: str) -> int:
    """Whitespace-delimited tokens, counted before any stop-word removal."""
    return len(text.split())


def _merge(sentences: List[Sentence]) -> Sentence:
    first = sentences[0]
    return make_sentence(first.doc_id, first.index, ' '.join(s.text for s in sentences))


def extract_candidates(sentences: List[Sentence]) -> List[CandidateSentence]:
    """
    Every sentence matching a trigger label. A trigger sentence shorter than
    four tokens absorbs following non-trigger sentences, up to three in total.
    """
    candidates: List[CandidateSentence] = []
    i = 0
    while i < len(sentences):
        sentence = sentences[i]
        trigger = match_trigger(sentence.text)
        if trigger is None:
            i += 1
            continue

        group = [sentence]
        j = i + 1
        while (word_count(' '.join(s.text for s in group)) < MERGE_MIN_TOKENS
               and len(group) < MERGE_MAX_SENTENCES
               and j < len(sentences)
               and match_trigger(sentences[j].text) is None):
            group.append(sentences[j])
            j += 1

        merged = _merge(group) if len(group) > 1 else sentence
        kind, number = trigger
        candidates.append(CandidateSentence(
            sentence=merged,
            trigger_kind=kind,
            hypothesis_num=number,
            word_count=word_count(merged.text),
        ))
        i = j

    return candidates


def censor_by_length(candidates: List[CandidateSentence], max_words: int = 60) -> List[CandidateSentence]:
    """Drop candidates longer than ``max_words`` words, keeping order."""
    if max_words < 1:
        raise ValueError(f"max_words must be >= 1, got {max_words}")
    kept = [c for c in candidates if c.word_count <= max_words]
    if len(kept) < len(candidates):
        logger.debug(f"Censored {len(candidates) - len(kept)} candidates longer than {max_words} words")
    return kept


def hypothesis_body(candidate: Union[CandidateSentence, str]) -> str:
    """Candidate text without its leading label and closing punctuation, lowercased."""
    text = candidate.text if isinstance(candidate, CandidateSentence) else candidate
    body = LEADING_LABEL_RE.sub('', text, count=1)
    body = TRAILING_RE.sub('', body)
    body = WHITESPACE_RE.sub(' ', body).strip()
    return body.lower()


def candidate_record(candidate: CandidateSentence) -> dict:
    return {
        'doc_id': candidate.doc_id,
        'sentence_index': candidate.sentence.index,
        'hypothesis_num': candidate.hypothesis_num,
        'text': candidate.text,
    }


def write_candidates_jsonl(candidates: Iterable[CandidateSentence], path: Union[str, Path]) -> int:
    count = 0
    with open(path, 'w', encoding='utf-8', newline='\n') as f:
        for candidate in candidates:
            f.write(json.dumps(candidate_record(candidate), ensure_ascii=False) + '\n')
            count += 1
    logger.info(f"Wrote {count} candidates to {path}")
    return count


def read_candidates_jsonl(path: Union[str, Path]) -> List[CandidateSentence]:
    candidates = []
    with open(path, encoding='utf-8') as f:
        for line_number, line in enumerate(f, start=1):
            if not line.strip():
                continue
            try:
                record = json.loads(line)
                text = record['text']
                sentence = make_sentence(record['doc_id'], int(record['sentence_index']), text)
                number = record['hypothesis_num']
            except (json.JSONDecodeError, KeyError, TypeError, ValueError) as e:
                raise DataFormatError(str(path), line_number, f"bad candidate record: {e}") from e

            trigger = match_trigger(text)
            if trigger is None or not HYPOTHESIS_NUM_RE.match(number):
                raise DataFormatError(str(path), line_number, "record does not carry a trigger label")
            candidates.append(CandidateSentence(
                sentence=sentence,
                trigger_kind=trigger[0],
                hypothesis_num=number,
                word_count=word_count(text),
            ))
    return candidates
