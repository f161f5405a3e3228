# src/alignment/coral.py
"""
CORAL: squared Frobenius distance between the feature covariances of two batches,
scaled by 1/(4 d^2). The batches need not be paired or equal-sized.

Gradient sign: with D = C_I - C_T,

    dL/dI =  I_c D / (d^2 (n_I - 1))
    dL/dT = -T_c D / (d^2 (n_T - 1))

where X_c is X with column means removed. The text side carries the minus sign because
C_T enters the loss with a negative sign; this is the sign that agrees with central finite
differences (see tests/test_alignment.py).
"""

from typing import Tuple

import numpy as np

from src.numerics import covariance, frob_sq_diff
from src.utils.errors import ShapeError
from .base_alignment import AlignmentBatch, AlignmentKind, BaseAlignment


def _check_columns(img_act: np.ndarray, txt_act: np.ndarray):
    if img_act.ndim != 2 or txt_act.ndim != 2:
        raise ShapeError(f"CORAL expects 2-D batches, got {img_act.shape} and {txt_act.shape}")
    if img_act.shape[1] != txt_act.shape[1]:
        raise ShapeError(f"CORAL column mismatch: {img_act.shape[1]} vs {txt_act.shape[1]}")


def coral_loss(img_act: np.ndarray, txt_act: np.ndarray) -> float:
    _check_columns(img_act, txt_act)
    d = img_act.shape[1]
    return frob_sq_diff(covariance(img_act), covariance(txt_act)) / (4.0 * d * d)


def coral_grad(img_act: np.ndarray, txt_act: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    _check_columns(img_act, txt_act)
    n_img, d = img_act.shape
    n_txt = txt_act.shape[0]
    diff = covariance(img_act) - covariance(txt_act)

    img_centered = img_act - img_act.mean(axis=0, keepdims=True)
    txt_centered = txt_act - txt_act.mean(axis=0, keepdims=True)

    grad_img = img_centered @ diff / (d * d * (n_img - 1))
    grad_txt = -(txt_centered @ diff) / (d * d * (n_txt - 1))
    return grad_img, grad_txt


class CoralAlignment(BaseAlignment):
    name = "coral"

    def __init__(self, kind: AlignmentKind = AlignmentKind()):
        self.kind = kind

    def loss(self, img_act, txt_act, batch: AlignmentBatch) -> float:
        return coral_loss(img_act, txt_act)

    def grad(self, img_act, txt_act, batch: AlignmentBatch):
        return coral_grad(img_act, txt_act)
