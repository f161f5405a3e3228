# src/features/corpus.py
"""Raw text corpus: one document per line, ``id<TAB>label<TAB>raw text``."""

from dataclasses import dataclass
from typing import List, Sequence

from src.utils.errors import EmptyCorpus, ParseError
from .feature_file import FeatureRecord, iter_text_lines
from .tfidf import Vocabulary, tfidf_transform_many


@dataclass(frozen=True)
class CorpusDocument:
    doc_id: str
    label: int
    text: str


def read_corpus(path: str) -> List[CorpusDocument]:
    docs = []
    seen = set()
    for line_no, line in iter_text_lines(path):
        if not line.strip():
            continue
        parts = line.split('\t', 2)
        if len(parts) != 3:
            raise ParseError(f"expected 'id<TAB>label<TAB>text', got {len(parts)} fields",
                             path=path, line_no=line_no)
        doc_id, label_str, text = parts
        try:
            label = int(label_str)
        except ValueError:
            raise ParseError(f"label '{label_str}' is not an integer", path=path, line_no=line_no)
        if label < 0:
            raise ParseError(f"label must be non-negative, got {label}", path=path, line_no=line_no)
        if doc_id in seen:
            raise ParseError(f"duplicate id '{doc_id}'", path=path, line_no=line_no)
        seen.add(doc_id)
        docs.append(CorpusDocument(doc_id=doc_id, label=label, text=text))
    if not docs:
        raise EmptyCorpus(f"{path}: corpus has no documents")
    return docs


def featurize_corpus(docs: Sequence[CorpusDocument], vocab: Vocabulary) -> List[FeatureRecord]:
    matrix = tfidf_transform_many(vocab, (d.text for d in docs))
    return [FeatureRecord(sample_id=d.doc_id, label=d.label, vector=row) for d, row in zip(docs, matrix)]
