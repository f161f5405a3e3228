# src/retrieval/index.py

from dataclasses import dataclass, field
from enum import Enum
from typing import Optional, Tuple

import numpy as np

from src.data_loader import Modality, ModalityData
from src.network import BranchNet, embed
from src.utils.errors import DegenerateVector, IncompatibleMetric, ShapeError
from .metrics import Metric, degenerate_rows, distances_to


class EmbeddingKind(str, Enum):
    PROBABILITY = "probability"
    LOGIT = "logit"

    def __str__(self) -> str:
        return self.value


@dataclass(frozen=True)
class EmbeddingIndex:
    modality: Modality
    ids: Tuple[str, ...]
    labels: np.ndarray
    embeddings: np.ndarray
    kind: EmbeddingKind = EmbeddingKind.PROBABILITY

    def __post_init__(self):
        n = self.embeddings.shape[0]
        if len(self.ids) != n or self.labels.shape[0] != n:
            raise ShapeError(f"index rows {n}, ids {len(self.ids)}, labels {self.labels.shape[0]} must agree")
        if self.kind is EmbeddingKind.PROBABILITY and n:
            sums = self.embeddings.sum(axis=1)
            if np.any(np.abs(sums - 1.0) > 1e-6) or np.any(self.embeddings < 0):
                raise ValueError("probability embeddings must be non-negative rows summing to 1")

    def __len__(self) -> int:
        return len(self.ids)

    @property
    def dim(self) -> int:
        return int(self.embeddings.shape[1])

    def position(self, sample_id: str) -> int:
        return self.ids.index(sample_id)

    @classmethod
    def from_data(cls, branch: BranchNet, data: ModalityData,
                  kind: EmbeddingKind = EmbeddingKind.PROBABILITY) -> "EmbeddingIndex":
        kind = EmbeddingKind(kind)
        return cls(
            modality=data.modality, ids=tuple(data.ids), labels=np.asarray(data.labels),
            embeddings=embed(branch, data.features, kind.value), kind=kind,
        )


@dataclass(frozen=True)
class RankingList:
    query_id: str
    ids: Tuple[str, ...]
    scores: np.ndarray          # -distance, non-increasing
    labels: np.ndarray
    relevant: np.ndarray        # bool, candidate label == query label
    skipped: Tuple[str, ...] = field(default_factory=tuple)

    def __len__(self) -> int:
        return len(self.ids)

    @property
    def num_relevant(self) -> int:
        return int(self.relevant.sum())

    @property
    def first_relevant_rank(self) -> Optional[int]:
        hits = np.flatnonzero(self.relevant)
        return int(hits[0]) + 1 if hits.size else None


def check_compatible(metric: Metric, kind: EmbeddingKind):
    if Metric(metric) is Metric.KL and EmbeddingKind(kind) is not EmbeddingKind.PROBABILITY:
        raise IncompatibleMetric("KL divergence needs probability embeddings, not logits")


def rank(query: np.ndarray, index: EmbeddingIndex, metric: Metric,
         query_id: str = "", query_label: Optional[int] = None) -> RankingList:
    """
    Every index entry ordered by ascending distance, ties by ascending id. Candidates on which
    the metric is undefined are left out and listed in ``skipped``.
    """
    metric = Metric(metric)
    check_compatible(metric, index.kind)
    query = np.asarray(query, dtype=np.float64)
    if query.ndim != 1 or query.shape[0] != index.dim:
        raise ShapeError(f"query width {query.shape} does not match index width {index.dim}")
    if degenerate_rows(metric, query[None, :])[0]:
        raise DegenerateVector(f"query '{query_id}' is degenerate under {metric}")

    bad = degenerate_rows(metric, index.embeddings)
    valid = np.flatnonzero(~bad)
    dist = distances_to(metric, query, index.embeddings[valid])

    order = sorted(range(valid.size), key=lambda i: (dist[i], index.ids[valid[i]]))
    rows = valid[order]
    labels = index.labels[rows]
    relevant = labels == query_label if query_label is not None else np.zeros(rows.size, dtype=bool)
    return RankingList(
        query_id=query_id,
        ids=tuple(index.ids[r] for r in rows),
        scores=-dist[order],
        labels=labels,
        relevant=np.asarray(relevant, dtype=bool),
        skipped=tuple(index.ids[r] for r in np.flatnonzero(bad)),
    )
