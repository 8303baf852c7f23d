"""
Hypothesis Reader - Document Loading
Reads plain-text documents and delegates other formats to an external extractor.
"""

import logging
import shlex
import subprocess
from dataclasses import dataclass
from pathlib import Path
from typing import List, Optional, Union

from src.errors import EmptyDocument, ExtractorFailed, UnreadableDocument

logger = logging.getLogger(__name__)

TEXT_SUFFIXES = {'.txt'}
EXTRACTOR_TIMEOUT_SECONDS = 300


@dataclass(frozen=True)
class Document:
    doc_id: str
    raw_text: str

    def __post_init__(self):
        if not self.doc_id:
            raise ValueError("doc_id must be non-empty")


def _run_extractor(path: Path, template: str) -> str:
    # Split first so a path containing spaces stays one argument
    argv = [part.replace('{input}', str(path)) for part in shlex.split(template)]
    if not any(str(path) in part for part in argv):
        argv.append(str(path))

    logger.debug(f"Running extractor: {argv}")
    try:
        completed = subprocess.run(argv, capture_output=True, timeout=EXTRACTOR_TIMEOUT_SECONDS)
    except (OSError, subprocess.TimeoutExpired) as e:
        raise ExtractorFailed(f"extractor could not run on {path.name}: {e}") from e

    if completed.returncode != 0:
        stderr = completed.stderr.decode('utf-8', errors='replace').strip()
        raise ExtractorFailed(f"extractor exited with status {completed.returncode} on {path.name}: {stderr}")

    return completed.stdout.decode('utf-8', errors='replace')


def load_document(path: Union[str, Path], extractor: Optional[str] = None) -> Document:
    """
    Load one document. ``.txt`` files pass through unchanged; anything else is
    converted by ``extractor``, a command template containing ``{input}``.
    """
    path = Path(path)

    if path.suffix.lower() in TEXT_SUFFIXES:
        try:
            raw_text = path.read_bytes().decode('utf-8')
        except OSError as e:
            raise UnreadableDocument(f"cannot read {path}: {e}") from e
        except UnicodeDecodeError as e:
            raise UnreadableDocument(f"{path} is not valid UTF-8: {e}") from e
    else:
        if not path.is_file():
            raise UnreadableDocument(f"cannot read {path}: no such file")
        if not extractor:
            raise UnreadableDocument(f"{path.name} is not plain text and no extractor is configured")
        raw_text = _run_extractor(path, extractor)

    if not raw_text.strip():
        raise EmptyDocument(f"{path.name} produced no text (empty file or poor OCR quality)")

    return Document(doc_id=path.name, raw_text=raw_text)


def list_document_paths(directory: Union[str, Path], extractor: Optional[str] = None) -> List[Path]:
    """Files to process, sorted by name; non-text files only when an extractor is set."""
    directory = Path(directory)
    if not directory.is_dir():
        raise UnreadableDocument(f"input directory {directory} does not exist")

    paths = []
    for path in sorted(directory.iterdir(), key=lambda p: p.name):
        if not path.is_file() or path.name.startswith('.'):
            continue
        if path.suffix.lower() in TEXT_SUFFIXES or extractor:
            paths.append(path)
        else:
            logger.warning(f"Skipping {path.name}: not plain text and no extractor configured")
    return paths
