# src/retrieval/scoring.py

import csv
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import List, Optional, Tuple

import numpy as np
from tqdm import tqdm

from src.utils.errors import DegenerateVector, NoEvaluableQueries, NoRelevantItems
from .index import EmbeddingIndex, RankingList, check_compatible, rank
from .metrics import Metric

MAP_REPORT_HEADER = ["direction", "metric", "map", "num_queries", "num_skipped"]
PER_QUERY_HEADER = ["query_id", "ap", "first_relevant_rank"]


def average_precision(ranking: RankingList, depth: Optional[int] = None) -> float:
    """
    AP = (1/R) * sum_k (R_k / k) * rel_k, R = relevant count over the full list.
    ``depth`` truncates the sum only; the normalizer stays R.
    """
    rel = np.asarray(ranking.relevant, dtype=bool)
    total_relevant = int(rel.sum())
    if total_relevant == 0:
        raise NoRelevantItems(f"query '{ranking.query_id}' has no relevant candidate")
    if depth is not None and depth < 1:
        raise ValueError(f"depth must be >= 1, got {depth}")

    k = np.arange(1, rel.size + 1)
    terms = np.cumsum(rel) / k * rel
    if depth is not None:
        terms = terms[:depth]
    return float(terms.sum() / total_relevant)


@dataclass(frozen=True)
class QueryAP:
    query_id: str
    ap: float
    first_relevant_rank: Optional[int]


@dataclass
class MapResult:
    map: float
    num_queries: int
    num_skipped: int
    per_query: List[QueryAP] = field(default_factory=list)
    skipped_ids: Tuple[str, ...] = ()

    def to_row(self, direction: str, metric: Metric) -> dict:
        return {
            "direction": direction,
            "metric": str(metric),
            "map": f"{self.map:.12g}",
            "num_queries": self.num_queries,
            "num_skipped": self.num_skipped,
        }


def _score_query(queries: EmbeddingIndex, index: EmbeddingIndex, metric: Metric,
                 depth: Optional[int], row: int):
    query_id = queries.ids[row]
    try:
        ranking = rank(queries.embeddings[row], index, metric,
                       query_id=query_id, query_label=int(queries.labels[row]))
        return QueryAP(query_id, average_precision(ranking, depth), ranking.first_relevant_rank)
    except (NoRelevantItems, DegenerateVector):
        return None


def mean_ap(queries: EmbeddingIndex, index: EmbeddingIndex, metric: Metric,
            depth: Optional[int] = None, max_workers: int = 1,
            show_progress: bool = False) -> MapResult:
    """
    Mean AP of every query row against ``index``. Queries without a relevant candidate, or
    degenerate under ``metric``, are excluded and counted in ``num_skipped``.
    """
    metric = Metric(metric)
    check_compatible(metric, queries.kind)
    check_compatible(metric, index.kind)
    n = len(queries)
    if n == 0:
        raise NoEvaluableQueries("query set is empty")

    def score(row):
        return _score_query(queries, index, metric, depth, row)

    if max_workers > 1:
        with ThreadPoolExecutor(max_workers=max_workers) as executor:
            results = list(tqdm(executor.map(score, range(n)), total=n,
                                desc=f"MAP ({metric})", disable=not show_progress))
    else:
        results = [score(row) for row in tqdm(range(n), desc=f"MAP ({metric})", disable=not show_progress)]

    scored = [r for r in results if r is not None]
    skipped = tuple(queries.ids[i] for i, r in enumerate(results) if r is None)
    if not scored:
        raise NoEvaluableQueries(f"none of the {n} queries could be scored under {metric}")
    return MapResult(
        map=float(np.mean([r.ap for r in scored])),
        num_queries=len(scored),
        num_skipped=len(skipped),
        per_query=scored,
        skipped_ids=skipped,
    )


def write_map_report(rows: List[dict], path: str) -> str:
    os.makedirs(os.path.dirname(path) or ".", exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="") as f:
        writer = csv.DictWriter(f, fieldnames=MAP_REPORT_HEADER, lineterminator="\n")
        writer.writeheader()
        writer.writerows(rows)
    return path


def write_per_query(result: MapResult, path: str) -> str:
    os.makedirs(os.path.dirname(path) or ".", exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="") as f:
        writer = csv.writer(f, lineterminator="\n")
        writer.writerow(PER_QUERY_HEADER)
        for q in result.per_query:
            writer.writerow([q.query_id, f"{q.ap:.12g}", "" if q.first_relevant_rank is None else q.first_relevant_rank])
    return path
