# src/network/branch.py
"""
One modality branch: fc1 -> ReLU -> fc2 (logits) -> softmax.

Alignment terms attach at two points of the forward cache:
  - ``h``: the post-ReLU fc1 activation
  - ``o``: the fc2 logits (pre-softmax)
``backward`` accepts their upstream gradients and propagates them with the
cross-entropy gradient through the rest of the chain.
"""

from dataclasses import dataclass
from typing import Optional

import numpy as np

from src.utils.errors import ShapeError
from .layers import DenseLayer, check_labels, init_dense, one_hot, relu, softmax


@dataclass(frozen=True)
class BranchNet:
    fc1: DenseLayer
    fc2: DenseLayer

    def __post_init__(self):
        if self.fc1.d_out != self.fc2.d_in:
            raise ShapeError(f"fc1 output {self.fc1.d_out} does not feed fc2 input {self.fc2.d_in}")

    @property
    def input_dim(self) -> int:
        return self.fc1.d_in

    @property
    def hidden_dim(self) -> int:
        return self.fc1.d_out

    @property
    def num_labels(self) -> int:
        return self.fc2.d_out


@dataclass(frozen=True)
class ForwardCache:
    x: np.ndarray
    h_pre: np.ndarray
    h: np.ndarray
    o: np.ndarray
    s: np.ndarray


@dataclass(frozen=True)
class BranchGrads:
    dW1: np.ndarray
    db1: np.ndarray
    dW2: np.ndarray
    db2: np.ndarray

    @classmethod
    def zeros_like(cls, branch: BranchNet) -> "BranchGrads":
        return cls(
            dW1=np.zeros_like(branch.fc1.W), db1=np.zeros_like(branch.fc1.b),
            dW2=np.zeros_like(branch.fc2.W), db2=np.zeros_like(branch.fc2.b),
        )


def init_branch(input_dim: int, hidden_dim: int, num_labels: int, rng: np.random.Generator) -> BranchNet:
    return BranchNet(fc1=init_dense(input_dim, hidden_dim, rng), fc2=init_dense(hidden_dim, num_labels, rng))


def forward(branch: BranchNet, x: np.ndarray) -> ForwardCache:
    if x.ndim != 2 or x.shape[1] != branch.input_dim:
        raise ShapeError(f"branch expects n x {branch.input_dim} input, got {x.shape}")
    h_pre = branch.fc1.apply(x)
    h = relu(h_pre)
    o = branch.fc2.apply(h)
    return ForwardCache(x=x, h_pre=h_pre, h=h, o=o, s=softmax(o))


def backward(branch: BranchNet, cache: ForwardCache, labels: np.ndarray,
             grad_h: Optional[np.ndarray] = None, grad_o: Optional[np.ndarray] = None) -> BranchGrads:
    """
    Gradients of mean cross-entropy plus the injected alignment terms w.r.t. W1, b1, W2, b2.
    ``grad_h``/``grad_o`` are dLoss_align/dh and dLoss_align/do (None means zero).
    """
    n, num_labels = cache.o.shape
    labels = check_labels(labels, num_labels)
    if labels.shape[0] != n:
        raise ShapeError(f"{n} cached rows but {labels.shape[0]} labels")
    if grad_h is not None and grad_h.shape != cache.h.shape:
        raise ShapeError(f"grad_h shape {grad_h.shape} does not match h {cache.h.shape}")
    if grad_o is not None and grad_o.shape != cache.o.shape:
        raise ShapeError(f"grad_o shape {grad_o.shape} does not match o {cache.o.shape}")

    # softmax + CE: dL/do = (S - Y) / n
    d_o = (cache.s - one_hot(labels, num_labels)) / n
    if grad_o is not None:
        d_o = d_o + grad_o

    dW2 = d_o.T @ cache.h
    db2 = d_o.sum(axis=0)

    d_h = d_o @ branch.fc2.W
    if grad_h is not None:
        d_h = d_h + grad_h
    d_h_pre = d_h * (cache.h_pre > 0)

    dW1 = d_h_pre.T @ cache.x
    db1 = d_h_pre.sum(axis=0)
    return BranchGrads(dW1=dW1, db1=db1, dW2=dW2, db2=db2)
