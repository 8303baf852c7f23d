"""
Hypothesis Reader - Model Container Codec
Versioned binary container shared by the detector, tagger and linker files.

Layout: 10-byte ASCII magic, uint32 little-endian header length, UTF-8 JSON
header (sorted keys), then every tensor listed in ``header["tensors"]`` as
row-major little-endian float32.
"""

import json
import logging
import struct
from pathlib import Path
from typing import Any, Dict, List, Tuple, Union

import numpy as np

from src.errors import ModelFormatError

logger = logging.getLogger(__name__)

FORMAT_VERSION = 1
MAGIC_LENGTH = 10
FLOAT_DTYPE = np.dtype('<f4')

PathLike = Union[str, Path]


def write_container(path: PathLike, magic: bytes, header: Dict[str, Any],
                    tensors: List[Tuple[str, np.ndarray]]) -> None:
    """Write ``tensors`` (name, array) after a JSON header into ``path``."""
    if len(magic) != MAGIC_LENGTH:
        raise ValueError(f"magic must be {MAGIC_LENGTH} bytes, got {len(magic)}")

    full_header = dict(header)
    full_header['version'] = FORMAT_VERSION
    full_header['tensors'] = [[name, list(array.shape)] for name, array in tensors]
    header_bytes = json.dumps(full_header, sort_keys=True, ensure_ascii=False).encode('utf-8')

    with open(path, 'wb') as f:
        f.write(magic)
        f.write(struct.pack('<I', len(header_bytes)))
        f.write(header_bytes)
        for _, array in tensors:
            f.write(np.ascontiguousarray(array, dtype=FLOAT_DTYPE).tobytes(order='C'))

    logger.debug(f"Wrote {magic.decode('ascii')} container to {path} ({len(tensors)} tensors)")


def read_container(path: PathLike, magic: bytes) -> Tuple[Dict[str, Any], Dict[str, np.ndarray]]:
    """Read a container written by :func:`write_container`; tensors come back as float32."""
    try:
        data = Path(path).read_bytes()
    except OSError as e:
        raise ModelFormatError(f"cannot read model file {path}: {e}") from e

    if data[:MAGIC_LENGTH] != magic:
        raise ModelFormatError(f"{path} is not a {magic.decode('ascii')} model file")

    offset = MAGIC_LENGTH
    if len(data) < offset + 4:
        raise ModelFormatError(f"{path} is truncated")
    (header_len,) = struct.unpack('<I', data[offset:offset + 4])
    offset += 4

    try:
        header = json.loads(data[offset:offset + header_len].decode('utf-8'))
    except (UnicodeDecodeError, json.JSONDecodeError) as e:
        raise ModelFormatError(f"{path} has a corrupt header: {e}") from e
    offset += header_len

    version = header.get('version')
    if version != FORMAT_VERSION:
        raise ModelFormatError(f"{path} has container version {version}, expected {FORMAT_VERSION}")

    entries = header.get('tensors')
    if not isinstance(entries, list) or not all(isinstance(e, list) and len(e) == 2 for e in entries):
        raise ModelFormatError(f"{path} has no valid tensor list in its header")

    tensors: Dict[str, np.ndarray] = {}
    for name, shape in entries:
        count = int(np.prod(shape)) if shape else 1
        nbytes = count * FLOAT_DTYPE.itemsize
        if offset + nbytes > len(data):
            raise ModelFormatError(f"{path} is truncated inside tensor '{name}'")
        tensors[name] = np.frombuffer(data, dtype=FLOAT_DTYPE, count=count, offset=offset).reshape(shape).copy()
        offset += nbytes

    if offset != len(data):
        raise ModelFormatError(f"{path} has {len(data) - offset} trailing bytes")

    return header, tensors
