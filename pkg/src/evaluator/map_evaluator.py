# src/evaluator/map_evaluator.py

from dataclasses import dataclass, field, replace
from typing import Dict, Iterable, List, Optional, Tuple

import numpy as np

from src.data_loader import MODALITIES, Dataset, Modality
from src.network import ModelParams
from src.retrieval import EmbeddingIndex, EmbeddingKind, MapResult, Metric, mean_ap
from src.utils.errors import DimensionMismatch
from .base_evaluator import BaseEvaluator

# direction -> (query modality, candidate modality)
DIRECTIONS = {
    "i2t": (Modality.IMAGE, Modality.TEXT),
    "t2i": (Modality.TEXT, Modality.IMAGE),
}
DIRECTION_TITLES = {"i2t": "Image→Text", "t2i": "Text→Image"}


@dataclass
class EvaluationReport:
    results: Dict[Tuple[str, Metric], MapResult] = field(default_factory=dict)

    def rows(self) -> List[dict]:
        return [result.to_row(direction, metric) for (direction, metric), result in self.results.items()]

    def get(self, direction: str, metric: Metric) -> MapResult:
        return self.results[(direction, Metric(metric))]

    def average_map(self, metric: Metric) -> float:
        maps = [r.map for (d, m), r in self.results.items() if m is Metric(metric)]
        return float(np.mean(maps))


def check_compatible(params: ModelParams, dataset: Dataset):
    """Model input widths must match the dataset and its labels must fit the model's K."""
    for modality in MODALITIES:
        width = dataset.dim(modality)
        expected = params.branch(modality).input_dim
        if dataset.records(modality) and width != expected:
            raise DimensionMismatch(f"{modality} features are {width}-wide, model expects {expected}")
    if dataset.num_labels > params.num_labels:
        raise DimensionMismatch(f"dataset has {dataset.num_labels} labels, model was trained for {params.num_labels}")


def _subset(index: EmbeddingIndex, labels: Iterable[int]) -> EmbeddingIndex:
    mask = np.isin(index.labels, list(labels))
    return replace(
        index,
        ids=tuple(sid for sid, keep in zip(index.ids, mask) if keep),
        labels=index.labels[mask],
        embeddings=index.embeddings[mask],
    )


class MAPEvaluator(BaseEvaluator):
    """
    Embeds one partition through both branches and scores every requested
    (direction, metric) pair by MAP. Candidates are always the full partition of the other
    modality; ``query_labels`` restricts only the query side (new-event evaluation).
    """

    def build_indices(self, params: ModelParams, dataset: Dataset,
                      ids_by_modality: Dict[Modality, Iterable[str]]) -> Dict[Modality, EmbeddingIndex]:
        check_compatible(params, dataset)
        kind = EmbeddingKind(self.config.embedding_kind)
        return {
            modality: EmbeddingIndex.from_data(params.branch(modality),
                                               dataset.select(modality, ids_by_modality[modality]), kind)
            for modality in MODALITIES
        }

    def evaluate(self, params: ModelParams, dataset: Dataset, ids_by_modality: Dict[Modality, Iterable[str]],
                 metrics: Optional[List[Metric]] = None, directions: Optional[List[str]] = None,
                 query_labels: Optional[Iterable[int]] = None,
                 indices: Optional[Dict[Modality, EmbeddingIndex]] = None) -> EvaluationReport:
        metrics = metrics if metrics is not None else self.config.metrics()
        directions = directions if directions is not None else self.config.directions()
        indices = indices or self.build_indices(params, dataset, ids_by_modality)
        if query_labels is not None:
            query_labels = sorted(set(int(l) for l in query_labels))

        report = EvaluationReport()
        for direction in directions:
            query_modality, candidate_modality = DIRECTIONS[direction]
            queries = indices[query_modality]
            if query_labels is not None:
                queries = _subset(queries, query_labels)
            for metric in metrics:
                report.results[(direction, Metric(metric))] = mean_ap(
                    queries, indices[candidate_modality], metric,
                    depth=self.config.eval_depth,
                    max_workers=self.config.max_workers,
                    show_progress=self.config.show_progress,
                )
        return report
