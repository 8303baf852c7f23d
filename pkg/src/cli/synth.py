"""
Hypothesis Reader - Synthetic Corpora
Template-generated hypothesis and discussion sentences for every trainable
stage, a matching word-vector table and a sample document.
"""

import json
import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Dict, Iterable, List, Sequence, Tuple, Union

import numpy as np

from src.evalkit.folds import make_rng
from src.ingest.segmenter import strip_edge_punctuation

logger = logging.getLogger(__name__)

CAUSES = [
    'firm size', 'ceo tenure', 'board independence', 'r&d intensity', 'organizational slack',
    'network centrality', 'employee discretion', 'top management team diversity', 'trust',
    'environmental dynamism', 'family ownership', 'prior alliance experience', 'age',
    'high-commitment hr practices', 'absorptive capacity', 'market orientation',
]
OUTCOMES = [
    'firm performance', 'innovation output', 'quit rates', 'market share', 'strategic change',
    'alliance formation', 'growth', 'dismissal rates', 'export intensity', 'ceo compensation levels',
    'new product introductions', 'survival', 'acquisition premiums', 'employee commitment',
]

# (template, causal, direction); {c} is the cause span and {o} the outcome span
RELATIONS: List[Tuple[str, int, str]] = [
    ('{c} is positively related to {o}', 0, 'pos'),
    ('{c} is positively associated with {o}', 0, 'pos'),
    ('{c} will be negatively related to {o}', 0, 'neg'),
    ('{c} is negatively associated with {o}', 0, 'neg'),
    ('{c} has an inverted u-shaped relationship with {o}', 0, 'non_lin'),
    ('{c} has a curvilinear association with {o}', 0, 'non_lin'),
    ('{c} increases {o}', 1, 'pos'),
    ('{c} will have a positive effect on {o}', 1, 'pos'),
    ('{o} is positively influenced by {c}', 1, 'pos'),
    ('{c} leads to lower {o}', 1, 'neg'),
    ('{c} will reduce {o}', 1, 'neg'),
    ('{c} has an inverted u-shaped effect on {o}', 1, 'non_lin'),
    ('the effect of {c} on {o} is curvilinear', 1, 'non_lin'),
]

DISCUSSION_TEMPLATES = [
    'The coefficient of {c} is positive and significant in model {n}, supporting hypothesis {n}.',
    'Table {n} reports the regression results for {o}.',
    'As predicted, the estimate for {c} is statistically significant (p < 0.05), so H{n} is supported.',
    'We find strong evidence that {c} matters for {o}, consistent with H{n}.',
    'Results of the panel analysis provide support for Proposition {n}.',
    'Hypothesis {n} is not supported because the coefficient of {c} is insignificant.',
    'In model {n} we add controls for {c} and the results remain robust.',
    'The results fail to confirm H{n} for {o}.',
    'Column {n} shows that the interaction term is significant, which supports H{n}.',
]

LABEL_FORMS = ['H{n}:', 'H{n}.', 'Hypothesis {n}:', 'Hypothesis {n}.', 'H{n}a:', 'Proposition {n}:']

INTRO_SENTENCES = [
    'Scholars have long debated how organizations respond to their environment.',
    'We develop theory on the antecedents of firm outcomes.',
    'Our sample covers manufacturing firms observed over ten years.',
]


@dataclass(frozen=True)
class SyntheticHypothesis:
    text: str
    tokens: Tuple[str, ...]
    tags: Tuple[int, ...]
    causal: int
    direction: str
    cause: str
    outcome: str


def _relation_tokens(template: str, cause: str, outcome: str) -> Tuple[List[str], List[int]]:
    tokens: List[str] = []
    tags: List[int] = []
    for piece in template.split(' '):
        if piece == '{c}':
            words, tag = cause.split(' '), 1
        elif piece == '{o}':
            words, tag = outcome.split(' '), 2
        else:
            words, tag = [piece], 0
        tokens.extend(words)
        tags.extend([tag] * len(words))
    return tokens, tags


def generate_hypotheses(n: int, seed: int = 0) -> List[SyntheticHypothesis]:
    """``n`` labeled hypothesis sentences with gold tags and link labels."""
    rng = make_rng(seed)
    hypotheses = []
    for i in range(n):
        template, causal, direction = RELATIONS[int(rng.integers(len(RELATIONS)))]
        cause = CAUSES[int(rng.integers(len(CAUSES)))]
        outcome = OUTCOMES[int(rng.integers(len(OUTCOMES)))]
        tokens, tags = _relation_tokens(template, cause, outcome)
        label = LABEL_FORMS[int(rng.integers(len(LABEL_FORMS)))].format(n=1 + i % 9)
        body = ' '.join(tokens)
        text = f"{label} {body[0].upper()}{body[1:]}."
        hypotheses.append(SyntheticHypothesis(
            text=text, tokens=tuple(tokens), tags=tuple(tags),
            causal=causal, direction=direction, cause=cause, outcome=outcome,
        ))
    return hypotheses


def generate_discussion(n: int, seed: int = 0) -> List[str]:
    """``n`` result-discussion sentences that mention hypothesis labels."""
    rng = make_rng(seed)
    sentences = []
    for _ in range(n):
        template = DISCUSSION_TEMPLATES[int(rng.integers(len(DISCUSSION_TEMPLATES)))]
        sentences.append(template.format(
            c=CAUSES[int(rng.integers(len(CAUSES)))],
            o=OUTCOMES[int(rng.integers(len(OUTCOMES)))],
            n=int(rng.integers(1, 10)),
        ))
    return sentences


def detector_records(n_hypotheses: int = 643, n_discussion: int = 657, seed: int = 0) -> List[Dict]:
    """Shuffled {"text", "label"} records."""
    records = [{'text': h.text, 'label': 1} for h in generate_hypotheses(n_hypotheses, seed)]
    records += [{'text': s, 'label': 0} for s in generate_discussion(n_discussion, seed + 1)]
    order = make_rng(seed + 2).permutation(len(records))
    return [records[i] for i in order]


def tagger_records(n: int = 500, seed: int = 0) -> List[Dict]:
    return [{'tokens': list(h.tokens), 'tags': list(h.tags)} for h in generate_hypotheses(n, seed)]


def linker_records(n: int = 500, seed: int = 0) -> List[Dict]:
    return [{'text': h.text, 'causal': h.causal, 'direction': h.direction}
            for h in generate_hypotheses(n, seed)]


def sample_document(n_hypotheses: int = 6, seed: int = 0) -> str:
    """A short paper: introduction, numbered hypotheses, then discussion."""
    hypotheses = generate_hypotheses(n_hypotheses, seed)
    lines = list(INTRO_SENTENCES)
    for i, h in enumerate(hypotheses, start=1):
        body = ' '.join(h.tokens)
        lines.append(f"Hypothesis {i}: {body[0].upper()}{body[1:]}.")
    lines.extend(generate_discussion(3, seed + 1))
    return ' '.join(lines) + '\n'


def lookup_keys(texts: Iterable[str]) -> List[str]:
    """Sorted distinct lowercase, edge-stripped tokens of ``texts``."""
    keys = set()
    for text in texts:
        for raw in text.split():
            key = strip_edge_punctuation(raw.lower())
            if key:
                keys.add(key)
    return sorted(keys)


def vector_lines(tokens: Sequence[str], dim: int = 50, seed: int = 0) -> List[str]:
    """GloVe-format lines with seeded Gaussian vectors."""
    rng = make_rng(seed)
    vectors = rng.normal(scale=0.5, size=(len(tokens), dim))
    return [token + ' ' + ' '.join(f"{v:.6f}" for v in row) for token, row in zip(tokens, vectors)]


def _write_jsonl(records: Iterable[Dict], path: Path) -> None:
    with open(path, 'w', encoding='utf-8', newline='\n') as f:
        for record in records:
            f.write(json.dumps(record, ensure_ascii=False) + '\n')


def write_synthetic_bundle(out_dir: Union[str, Path], seed: int = 0, dim: int = 50,
                           n_tagger: int = 500, n_linker: int = 500) -> Dict[str, Path]:
    """Write detector.jsonl, tagger.jsonl, linker.jsonl, vectors.txt and docs/sample.txt."""
    out = Path(out_dir)
    (out / 'docs').mkdir(parents=True, exist_ok=True)

    detector = detector_records(seed=seed)
    tagger = tagger_records(n_tagger, seed=seed + 10)
    linker = linker_records(n_linker, seed=seed + 20)
    document = sample_document(seed=seed + 30)

    paths = {
        'detector': out / 'detector.jsonl',
        'tagger': out / 'tagger.jsonl',
        'linker': out / 'linker.jsonl',
        'vectors': out / 'vectors.txt',
        'document': out / 'docs' / 'sample.txt',
    }
    _write_jsonl(detector, paths['detector'])
    _write_jsonl(tagger, paths['tagger'])
    _write_jsonl(linker, paths['linker'])
    paths['document'].write_text(document, encoding='utf-8')

    texts = [r['text'] for r in detector] + [' '.join(r['tokens']) for r in tagger] + \
        [r['text'] for r in linker] + [document]
    keys = lookup_keys(texts)
    paths['vectors'].write_text('\n'.join(vector_lines(keys, dim, seed)) + '\n', encoding='utf-8')

    logger.info(f"Wrote synthetic bundle to {out}: {len(detector)} detector, {len(tagger)} tagger, "
                f"{len(linker)} linker records, {len(keys)} vectors")
    return paths
