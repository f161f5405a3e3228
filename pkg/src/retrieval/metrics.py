# src/retrieval/metrics.py
"""
Distances in the shared space.

- euclidean : l2 norm of the difference
- cosine    : 1 - cos(a, b)                      (zero vector -> DegenerateVector)
- nc        : 1 - cos(a - mean(a), b - mean(b))  (constant vector -> DegenerateVector)
- kl        : KL(query || candidate) after adding 1e-12 and renormalizing
"""

from enum import Enum

import numpy as np
from scipy.spatial.distance import cdist
from scipy.special import rel_entr

from src.utils.errors import ConfigError, DegenerateVector, IncompatibleMetric, ShapeError

KL_EPS = 1e-12


class Metric(str, Enum):
    KL = "kl"
    EUCLIDEAN = "euclidean"
    COSINE = "cosine"
    NC = "nc"

    def __str__(self) -> str:
        return self.value


# cmd_eval --metric all 순서
METRIC_ORDER = (Metric.KL, Metric.EUCLIDEAN, Metric.COSINE, Metric.NC)

_SCIPY_NAMES = {Metric.EUCLIDEAN: "euclidean", Metric.COSINE: "cosine", Metric.NC: "correlation"}


def parse_metric(name) -> Metric:
    try:
        return Metric(str(name).lower())
    except ValueError:
        raise ConfigError(f"Unknown metric '{name}'. Available: {[m.value for m in METRIC_ORDER]}")


def degenerate_rows(metric: Metric, matrix: np.ndarray) -> np.ndarray:
    """Boolean mask of rows on which ``metric`` is undefined."""
    if metric is Metric.COSINE:
        return ~np.any(matrix != 0, axis=1)
    if metric is Metric.NC:
        return np.ptp(matrix, axis=1) == 0
    return np.zeros(matrix.shape[0], dtype=bool)


def _smooth(p: np.ndarray) -> np.ndarray:
    if np.any(p < 0):
        raise IncompatibleMetric("KL divergence needs non-negative (probability) vectors")
    p = p + KL_EPS
    return p / p.sum(axis=-1, keepdims=True)


def distances_to(metric: Metric, query: np.ndarray, candidates: np.ndarray) -> np.ndarray:
    """
    Distances from one query vector to every candidate row. Callers filter degenerate rows first.
    """
    metric = Metric(metric)
    query = np.asarray(query, dtype=np.float64)
    if candidates.ndim != 2 or query.ndim != 1 or candidates.shape[1] != query.shape[0]:
        raise ShapeError(f"query of shape {query.shape} does not match candidates {candidates.shape}")
    if candidates.shape[0] == 0:
        return np.zeros(0)
    if metric is Metric.KL:
        return rel_entr(_smooth(query)[None, :], _smooth(candidates)).sum(axis=1)
    return cdist(query[None, :], candidates, metric=_SCIPY_NAMES[metric])[0]


def distance(metric: Metric, a, b) -> float:
    metric = Metric(metric)
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    if a.shape != b.shape or a.ndim != 1:
        raise ShapeError(f"distance needs two equal-length vectors, got {a.shape} and {b.shape}")
    if np.any(degenerate_rows(metric, np.vstack([a, b]))):
        raise DegenerateVector(f"{metric} distance is undefined for a {'zero' if metric is Metric.COSINE else 'constant'} vector")
    return float(distances_to(metric, a, b[None, :])[0])
