# src/retrieval/__init__.py
from .metrics import KL_EPS, METRIC_ORDER, Metric, degenerate_rows, distance, distances_to, parse_metric
from .index import EmbeddingIndex, EmbeddingKind, RankingList, check_compatible, rank
from .scoring import (
    MAP_REPORT_HEADER, PER_QUERY_HEADER, MapResult, QueryAP,
    average_precision, mean_ap, write_map_report, write_per_query,
)
