# src/features/feature_file.py
"""
Feature file format (UTF-8, one record per line):

    id<TAB>label<TAB>v1,v2,...,vd

Values are written with ``repr(float)`` so a write/read cycle is bitwise exact.
"""

import math
import os
from dataclasses import dataclass
from typing import Iterable, Iterator, List, Optional, Tuple

import numpy as np

from src.utils.errors import DanglingReference, DimensionMismatch, ParseError


@dataclass(frozen=True)
class FeatureRecord:
    sample_id: str
    label: int
    vector: np.ndarray

    @property
    def dim(self) -> int:
        return int(self.vector.shape[0])


def _parse_line(line: str, path: str, line_no: int) -> FeatureRecord:
    parts = line.split('\t')
    if len(parts) != 3:
        raise ParseError(f"expected 'id<TAB>label<TAB>values', got {len(parts)} fields", path=path, line_no=line_no)
    sample_id, label_str, values_str = parts
    if not sample_id:
        raise ParseError("empty id", path=path, line_no=line_no)
    try:
        label = int(label_str)
    except ValueError:
        raise ParseError(f"label '{label_str}' is not an integer", path=path, line_no=line_no)
    if label < 0:
        raise ParseError(f"label must be non-negative, got {label}", path=path, line_no=line_no)

    values = []
    for token in values_str.split(','):
        try:
            v = float(token)
        except ValueError:
            raise ParseError(f"non-numeric value '{token}' in record '{sample_id}'", path=path, line_no=line_no)
        if not math.isfinite(v):
            raise ParseError(f"non-finite value '{token}' in record '{sample_id}'", path=path, line_no=line_no)
        values.append(v)
    return FeatureRecord(sample_id=sample_id, label=label, vector=np.array(values, dtype=np.float64))


def iter_text_lines(path: str) -> Iterator[Tuple[int, str]]:
    """Yields ``(line_no, line)`` with the line ending stripped; bad UTF-8 is a ParseError at that line."""
    if not os.path.isfile(path):
        raise DanglingReference(f"file not found: {path}")
    with open(path, 'rb') as f:
        for line_no, raw in enumerate(f, start=1):
            try:
                line = raw.decode('utf-8')
            except UnicodeDecodeError as e:
                raise ParseError(f"not valid UTF-8 ({e.reason} at byte {e.start})", path=path, line_no=line_no)
            yield line_no, line.rstrip('\r\n')


def read_feature_file(path: str, expected_dim: Optional[int] = None) -> List[FeatureRecord]:
    """
    Parses and validates a feature file. Without ``expected_dim`` the width of the first
    record becomes the declared width.
    """
    records: List[FeatureRecord] = []
    seen = set()
    dim = expected_dim
    for line_no, line in iter_text_lines(path):
        if not line.strip():
            continue
        rec = _parse_line(line, path, line_no)
        if rec.sample_id in seen:
            raise ParseError(f"duplicate id '{rec.sample_id}'", path=path, line_no=line_no)
        if dim is None:
            dim = rec.dim
        elif rec.dim != dim:
            raise DimensionMismatch(
                f"{path}:{line_no}: record '{rec.sample_id}' has {rec.dim} values, expected {dim}",
                record_id=rec.sample_id,
            )
        seen.add(rec.sample_id)
        records.append(rec)
    return records


def load_image_features(path: str, expected_dim: int) -> List[FeatureRecord]:
    """Precomputed image descriptors (e.g. 4096-wide CNN features), validated against their width."""
    return read_feature_file(path, expected_dim=expected_dim)


def format_record(rec: FeatureRecord) -> str:
    return f"{rec.sample_id}\t{rec.label}\t" + ",".join(repr(float(v)) for v in rec.vector)


def write_feature_file(path: str, records: Iterable[FeatureRecord]):
    with open(path, 'w', encoding='utf-8', newline='\n') as f:
        for rec in records:
            f.write(format_record(rec) + "\n")
