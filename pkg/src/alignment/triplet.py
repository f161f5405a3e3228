# src/alignment/triplet.py
"""
Margin hinge on Euclidean distances, averaged over rows:

    mean_i max(0, margin + |a_i - p_i| - |a_i - n_i|)

For cross-modal training the triplets are drawn per step from the two label vectors:
each anchor gets one random same-label row and one random different-label row of the
other modality. Anchors with no valid positive or negative are skipped.
"""

from typing import Optional, Tuple

import numpy as np

from src.utils.errors import ShapeError
from .base_alignment import AlignmentBatch, AlignmentKind, BaseAlignment, TripletIndex


def _check(anchors, positives, negatives):
    if not (anchors.shape == positives.shape == negatives.shape):
        raise ShapeError(
            f"triplet inputs must share a shape, got {anchors.shape}, {positives.shape}, {negatives.shape}"
        )


def triplet_loss(anchors: np.ndarray, positives: np.ndarray, negatives: np.ndarray, margin: float) -> float:
    _check(anchors, positives, negatives)
    if anchors.shape[0] == 0:
        return 0.0
    d_ap = np.linalg.norm(anchors - positives, axis=1)
    d_an = np.linalg.norm(anchors - negatives, axis=1)
    return float(np.mean(np.maximum(0.0, margin + d_ap - d_an)))


def _unit_rows(diff: np.ndarray, norms: np.ndarray) -> np.ndarray:
    safe = np.where(norms > 0, norms, 1.0)
    return np.where(norms[:, None] > 0, diff / safe[:, None], 0.0)


def triplet_grad(anchors: np.ndarray, positives: np.ndarray, negatives: np.ndarray,
                 margin: float) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    _check(anchors, positives, negatives)
    n = anchors.shape[0]
    if n == 0:
        return np.zeros_like(anchors), np.zeros_like(positives), np.zeros_like(negatives)

    diff_ap = anchors - positives
    diff_an = anchors - negatives
    d_ap = np.linalg.norm(diff_ap, axis=1)
    d_an = np.linalg.norm(diff_an, axis=1)
    active = (margin + d_ap - d_an > 0).astype(np.float64)[:, None]

    u_ap = _unit_rows(diff_ap, d_ap)
    u_an = _unit_rows(diff_an, d_an)
    grad_a = active * (u_ap - u_an) / n
    grad_p = -active * u_ap / n
    grad_n = active * u_an / n
    return grad_a, grad_p, grad_n


def sample_triplets(y_anchor: np.ndarray, y_other: np.ndarray,
                    rng: Optional[np.random.Generator] = None) -> TripletIndex:
    """
    For each anchor label pick one same-label and one different-label row of ``y_other``.
    Without an rng the first eligible rows are used.
    """
    anchors, positives, negatives = [], [], []
    for i, label in enumerate(y_anchor):
        pos = np.flatnonzero(y_other == label)
        neg = np.flatnonzero(y_other != label)
        if pos.size == 0 or neg.size == 0:
            continue
        if rng is None:
            p, q = pos[0], neg[0]
        else:
            p = pos[rng.integers(pos.size)]
            q = neg[rng.integers(neg.size)]
        anchors.append(i)
        positives.append(p)
        negatives.append(q)
    as_idx = lambda xs: np.asarray(xs, dtype=np.int64)
    return TripletIndex(anchor=as_idx(anchors), positive=as_idx(positives), negative=as_idx(negatives))


class TripletAlignment(BaseAlignment):
    name = "triplet"

    def __init__(self, kind: AlignmentKind = AlignmentKind(kind="triplet")):
        self.kind = kind

    def pair(self, y_img, y_txt, rng=None) -> AlignmentBatch:
        y_img = np.asarray(y_img)
        y_txt = np.asarray(y_txt)
        if y_img.shape[0] != y_txt.shape[0]:
            raise ShapeError(f"triplet alignment needs equal batch sizes, got {y_img.shape[0]} and {y_txt.shape[0]}")
        return AlignmentBatch(
            y_img=y_img,
            y_txt=y_txt,
            img_to_txt=sample_triplets(y_img, y_txt, rng),
            txt_to_img=sample_triplets(y_txt, y_img, rng),
        )

    def _triplets(self, batch: AlignmentBatch):
        if batch.img_to_txt is None or batch.txt_to_img is None:
            batch = self.pair(batch.y_img, batch.y_txt)
        return batch.img_to_txt, batch.txt_to_img

    def loss(self, img_act, txt_act, batch: AlignmentBatch) -> float:
        i2t, t2i = self._triplets(batch)
        margin = self.kind.triplet_margin
        return (
            triplet_loss(img_act[i2t.anchor], txt_act[i2t.positive], txt_act[i2t.negative], margin)
            + triplet_loss(txt_act[t2i.anchor], img_act[t2i.positive], img_act[t2i.negative], margin)
        )

    def grad(self, img_act, txt_act, batch: AlignmentBatch):
        i2t, t2i = self._triplets(batch)
        margin = self.kind.triplet_margin
        grad_img = np.zeros_like(img_act)
        grad_txt = np.zeros_like(txt_act)

        g_a, g_p, g_n = triplet_grad(img_act[i2t.anchor], txt_act[i2t.positive], txt_act[i2t.negative], margin)
        np.add.at(grad_img, i2t.anchor, g_a)
        np.add.at(grad_txt, i2t.positive, g_p)
        np.add.at(grad_txt, i2t.negative, g_n)

        g_a, g_p, g_n = triplet_grad(txt_act[t2i.anchor], img_act[t2i.positive], img_act[t2i.negative], margin)
        np.add.at(grad_txt, t2i.anchor, g_a)
        np.add.at(grad_img, t2i.positive, g_p)
        np.add.at(grad_img, t2i.negative, g_n)
        return grad_img, grad_txt
