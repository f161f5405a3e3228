# src/network/layers.py

from dataclasses import dataclass

import numpy as np
from scipy.special import softmax as _scipy_softmax

from src.utils.errors import LabelError, ShapeError

PROB_FLOOR = 1e-12
_TINY = np.finfo(np.float64).tiny


def relu(x: np.ndarray) -> np.ndarray:
    return np.maximum(x, 0.0)


def softmax(logits: np.ndarray) -> np.ndarray:
    """
    Row-wise softmax. scipy subtracts the row max before exponentiating, so logits of
    magnitude 1e3 do not overflow; underflowed entries are lifted to the smallest positive
    float so every probability stays strictly positive.
    """
    if logits.ndim != 2:
        raise ShapeError(f"softmax expects an n x K matrix, got shape {logits.shape}")
    return np.maximum(_scipy_softmax(logits, axis=1), _TINY)


def check_labels(labels: np.ndarray, num_labels: int) -> np.ndarray:
    labels = np.asarray(labels)
    if labels.ndim != 1:
        raise LabelError(f"labels must be a 1-D vector, got shape {labels.shape}")
    if labels.size and not np.issubdtype(labels.dtype, np.integer):
        raise LabelError(f"labels must be integers, got dtype {labels.dtype}")
    bad = labels[(labels < 0) | (labels >= num_labels)]
    if bad.size:
        raise LabelError(f"label {int(bad[0])} out of range [0, {num_labels})")
    return labels.astype(np.int64)


def cross_entropy(probs: np.ndarray, labels: np.ndarray) -> float:
    """Mean of -log S[i, y_i], probabilities floored at 1e-12."""
    labels = check_labels(labels, probs.shape[1])
    if labels.shape[0] != probs.shape[0]:
        raise ShapeError(f"{probs.shape[0]} probability rows but {labels.shape[0]} labels")
    picked = probs[np.arange(labels.shape[0]), labels]
    return float(np.mean(-np.log(np.maximum(picked, PROB_FLOOR))))


def one_hot(labels: np.ndarray, num_labels: int) -> np.ndarray:
    out = np.zeros((labels.shape[0], num_labels))
    out[np.arange(labels.shape[0]), labels] = 1.0
    return out


@dataclass(frozen=True)
class DenseLayer:
    """y = x W^T + b, with W stored as d_out x d_in."""
    W: np.ndarray
    b: np.ndarray

    def __post_init__(self):
        if self.W.ndim != 2 or self.b.shape != (self.W.shape[0],):
            raise ShapeError(f"DenseLayer: W {self.W.shape} and b {self.b.shape} do not agree")
        if not (np.all(np.isfinite(self.W)) and np.all(np.isfinite(self.b))):
            raise ValueError("DenseLayer parameters must be finite")

    @property
    def d_in(self) -> int:
        return self.W.shape[1]

    @property
    def d_out(self) -> int:
        return self.W.shape[0]

    def apply(self, x: np.ndarray) -> np.ndarray:
        if x.ndim != 2 or x.shape[1] != self.d_in:
            raise ShapeError(f"DenseLayer expects n x {self.d_in} input, got {x.shape}")
        return x @ self.W.T + self.b


def init_dense(d_in: int, d_out: int, rng: np.random.Generator) -> DenseLayer:
    # Glorot uniform, bias 0
    limit = np.sqrt(6.0 / (d_in + d_out))
    return DenseLayer(W=rng.uniform(-limit, limit, size=(d_out, d_in)), b=np.zeros(d_out))
