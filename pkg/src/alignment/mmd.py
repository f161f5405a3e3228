# src/alignment/mmd.py
"""
Squared maximum mean discrepancy with a polynomial kernel

    k(x, y) = (gamma * x.y + c) ** degree

estimated as mean K(I, I) + mean K(T, T) - 2 mean K(I, T) (biased V-statistic, diagonals
included). Floating error can push the estimate slightly below zero; it is clamped at 0.
"""

from typing import Optional, Tuple

import numpy as np
from sklearn.metrics.pairwise import polynomial_kernel

from src.utils.errors import DegenerateBatch, ShapeError
from .base_alignment import AlignmentBatch, AlignmentKind, BaseAlignment


def _check(img_act: np.ndarray, txt_act: np.ndarray):
    if img_act.ndim != 2 or txt_act.ndim != 2:
        raise ShapeError(f"MMD expects 2-D batches, got {img_act.shape} and {txt_act.shape}")
    if img_act.shape[1] != txt_act.shape[1]:
        raise ShapeError(f"MMD column mismatch: {img_act.shape[1]} vs {txt_act.shape[1]}")
    if img_act.shape[0] == 0 or txt_act.shape[0] == 0:
        raise DegenerateBatch("MMD needs non-empty batches")


def _kernel(x, y, degree, gamma, offset):
    if degree == 0:
        # scikit-learn은 degree >= 1만 허용
        return np.ones((x.shape[0], y.shape[0]))
    return polynomial_kernel(x, y, degree=degree, gamma=gamma, coef0=offset)


def _raw_mmd(img_act, txt_act, offset, degree, gamma) -> float:
    k_ii = _kernel(img_act, img_act, degree, gamma, offset)
    k_tt = _kernel(txt_act, txt_act, degree, gamma, offset)
    k_it = _kernel(img_act, txt_act, degree, gamma, offset)
    return float(k_ii.mean() + k_tt.mean() - 2.0 * k_it.mean())


def mmd_loss(img_act: np.ndarray, txt_act: np.ndarray, offset: float = 1.0,
             degree: int = 2, gamma: Optional[float] = 1.0) -> float:
    _check(img_act, txt_act)
    return max(_raw_mmd(img_act, txt_act, offset, degree, gamma), 0.0)


def mmd_grad(img_act: np.ndarray, txt_act: np.ndarray, offset: float = 1.0,
             degree: int = 2, gamma: Optional[float] = 1.0) -> Tuple[np.ndarray, np.ndarray]:
    _check(img_act, txt_act)
    if _raw_mmd(img_act, txt_act, offset, degree, gamma) <= 0.0:
        # clamp 구간에서는 기울기 0
        return np.zeros_like(img_act), np.zeros_like(txt_act)

    n_img, d = img_act.shape
    n_txt = txt_act.shape[0]
    g = (1.0 / d) if gamma is None else gamma
    coef = 2.0 * degree * g

    # d/dx (g x.y + c)^p = p g (g x.y + c)^(p-1) y
    p_ii = _kernel(img_act, img_act, degree - 1, gamma, offset)
    p_tt = _kernel(txt_act, txt_act, degree - 1, gamma, offset)
    p_it = _kernel(img_act, txt_act, degree - 1, gamma, offset)

    grad_img = coef * (p_ii @ img_act) / (n_img * n_img) - coef * (p_it @ txt_act) / (n_img * n_txt)
    grad_txt = coef * (p_tt @ txt_act) / (n_txt * n_txt) - coef * (p_it.T @ img_act) / (n_img * n_txt)
    return grad_img, grad_txt


class MMDAlignment(BaseAlignment):
    name = "mmd"

    def __init__(self, kind: AlignmentKind = AlignmentKind(kind="mmd")):
        self.kind = kind

    def _params(self):
        return dict(offset=self.kind.mmd_offset, degree=self.kind.mmd_degree, gamma=self.kind.mmd_gamma)

    def loss(self, img_act, txt_act, batch: AlignmentBatch) -> float:
        return mmd_loss(img_act, txt_act, **self._params())

    def grad(self, img_act, txt_act, batch: AlignmentBatch):
        return mmd_grad(img_act, txt_act, **self._params())
