# src/features/tfidf.py
"""
TF-IDF text features: raw in-document count x ln(N / df). No smoothing, no normalization.
"""

import math
from collections import Counter
from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Optional, Sequence

import numpy as np

from src.utils.errors import ConfigError, EmptyCorpus, ParseError
from .feature_file import iter_text_lines
from .tokenizer import tokenize


@dataclass(frozen=True)
class Vocabulary:
    tokens: List[str]
    df: List[int]
    n_docs: int
    index: Dict[str, int] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if len(self.tokens) != len(self.df):
            raise ValueError("tokens and df must have the same length")
        object.__setattr__(self, 'index', {tok: i for i, tok in enumerate(self.tokens)})

    def __len__(self) -> int:
        return len(self.tokens)

    def idf(self) -> np.ndarray:
        return np.array([math.log(self.n_docs / d) for d in self.df], dtype=np.float64)

    def save(self, path: str):
        with open(path, 'w', encoding='utf-8', newline='\n') as f:
            f.write(f"#N={self.n_docs}\n")
            for i, (tok, d) in enumerate(zip(self.tokens, self.df)):
                f.write(f"{tok}\t{i}\t{d}\n")

    @classmethod
    def load(cls, path: str) -> "Vocabulary":
        lines = [line for _, line in iter_text_lines(path)]
        if not lines or not lines[0].startswith("#N="):
            raise ParseError("missing '#N=<count>' header", path=path, line_no=1)
        try:
            n_docs = int(lines[0][3:])
        except ValueError:
            raise ParseError(f"bad document count '{lines[0][3:]}'", path=path, line_no=1)

        tokens, dfs = [], []
        for line_no, line in enumerate(lines[1:], start=2):
            if not line.strip():
                continue
            parts = line.split('\t')
            if len(parts) != 3:
                raise ParseError(f"expected 'token<TAB>index<TAB>df', got {len(parts)} fields",
                                 path=path, line_no=line_no)
            tok, idx, d = parts
            try:
                idx, d = int(idx), int(d)
            except ValueError:
                raise ParseError(f"non-integer index/df in '{line}'", path=path, line_no=line_no)
            if idx != len(tokens):
                raise ParseError(f"index {idx} out of order (expected {len(tokens)})", path=path, line_no=line_no)
            if d < 1:
                raise ParseError(f"df must be >= 1, got {d}", path=path, line_no=line_no)
            tokens.append(tok)
            dfs.append(d)
        return cls(tokens=tokens, df=dfs, n_docs=n_docs)


def tfidf_fit(corpus: Sequence[str], top_k: Optional[int] = None) -> Vocabulary:
    """
    Document frequencies over all retained tokens. ``top_k`` keeps the k most frequent
    (by df, ties broken lexicographically); the kept tokens are indexed in lexicographic order.
    """
    if len(corpus) == 0:
        raise EmptyCorpus("cannot fit a vocabulary on an empty corpus")

    df = Counter()
    for doc in corpus:
        df.update(set(tokenize(doc)))
    if not df:
        raise EmptyCorpus(f"no tokens survived filtering in {len(corpus)} documents")

    ranked = sorted(df.items(), key=lambda kv: (-kv[1], kv[0]))
    if top_k is not None:
        if top_k < 1:
            raise ConfigError(f"top_k must be >= 1, got {top_k}")
        ranked = ranked[:top_k]
    kept = sorted(tok for tok, _ in ranked)
    return Vocabulary(tokens=kept, df=[df[tok] for tok in kept], n_docs=len(corpus))


def tfidf_transform(vocab: Vocabulary, text: str) -> np.ndarray:
    vec = np.zeros(len(vocab), dtype=np.float64)
    counts = Counter(tok for tok in tokenize(text) if tok in vocab.index)
    if not counts:
        return vec
    idf = vocab.idf()
    for tok, tf in counts.items():
        i = vocab.index[tok]
        vec[i] = tf * idf[i]
    return vec


def tfidf_transform_many(vocab: Vocabulary, texts: Iterable[str]) -> np.ndarray:
    rows = [tfidf_transform(vocab, t) for t in texts]
    return np.vstack(rows) if rows else np.zeros((0, len(vocab)))
