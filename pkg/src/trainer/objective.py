# src/trainer/objective.py
"""
Joint objective of one step:

    total = CE_image + CE_text + w * (align(h_I, h_T) + align(o_I, o_T))

h is the post-ReLU fc1 activation, o the fc2 logits. The CE terms are already batch means and
CORAL is a batch-level quantity, so there is no further 1/m on top. CORAL distances at both
attachment points are always reported, whatever alignment is trained with.
"""

from dataclasses import asdict, dataclass
from typing import Optional

import numpy as np

from src.alignment import AlignmentBatch, BaseAlignment, NoAlignment, coral_loss
from src.network import ForwardCache, ModelParams, ParamGrads, backward, cross_entropy


@dataclass(frozen=True)
class LossBreakdown:
    total: float
    loss_img: float
    loss_txt: float
    align_fc1: float    # weighted
    align_fc2: float    # weighted
    coral_fc1: float
    coral_fc2: float

    def to_dict(self) -> dict:
        return asdict(self)


def _pairing(alignment: BaseAlignment, y_img, y_txt, batch: Optional[AlignmentBatch]) -> AlignmentBatch:
    return batch if batch is not None else alignment.pair(y_img, y_txt, None)


def total_loss(img_cache: ForwardCache, txt_cache: ForwardCache, y_img: np.ndarray, y_txt: np.ndarray,
               alignment: BaseAlignment, weight: float = 1.0,
               batch: Optional[AlignmentBatch] = None) -> LossBreakdown:
    loss_img = cross_entropy(img_cache.s, y_img)
    loss_txt = cross_entropy(txt_cache.s, y_txt)

    align_fc1 = align_fc2 = 0.0
    if not isinstance(alignment, NoAlignment) and weight != 0:
        batch = _pairing(alignment, y_img, y_txt, batch)
        align_fc1 = weight * alignment.loss(img_cache.h, txt_cache.h, batch)
        align_fc2 = weight * alignment.loss(img_cache.o, txt_cache.o, batch)

    return LossBreakdown(
        total=loss_img + loss_txt + align_fc1 + align_fc2,
        loss_img=loss_img,
        loss_txt=loss_txt,
        align_fc1=align_fc1,
        align_fc2=align_fc2,
        coral_fc1=coral_loss(img_cache.h, txt_cache.h),
        coral_fc2=coral_loss(img_cache.o, txt_cache.o),
    )


def total_grads(params: ModelParams, img_cache: ForwardCache, txt_cache: ForwardCache,
                y_img: np.ndarray, y_txt: np.ndarray, alignment: BaseAlignment, weight: float = 1.0,
                batch: Optional[AlignmentBatch] = None) -> ParamGrads:
    """Gradient of ``total_loss(...).total`` w.r.t. both branches."""
    grad_h_img = grad_h_txt = grad_o_img = grad_o_txt = None
    if not isinstance(alignment, NoAlignment) and weight != 0:
        batch = _pairing(alignment, y_img, y_txt, batch)
        grad_h_img, grad_h_txt = alignment.grad(img_cache.h, txt_cache.h, batch)
        grad_o_img, grad_o_txt = alignment.grad(img_cache.o, txt_cache.o, batch)
        grad_h_img, grad_h_txt = weight * grad_h_img, weight * grad_h_txt
        grad_o_img, grad_o_txt = weight * grad_o_img, weight * grad_o_txt

    return ParamGrads(
        image=backward(params.image, img_cache, y_img, grad_h=grad_h_img, grad_o=grad_o_img),
        text=backward(params.text, txt_cache, y_txt, grad_h=grad_h_txt, grad_o=grad_o_txt),
    )
