# src/trainer/train_loop.py

import csv
import math
import os
from dataclasses import asdict, dataclass, field
from typing import List, Optional, Tuple

import numpy as np
from tqdm import tqdm

from src.alignment import build_alignment
from src.data_loader import ModalityData
from src.network import ModelParams, ParamGrads, check_labels, forward, init_model
from src.numerics import make_rng
from src.retrieval import EmbeddingIndex, Metric, mean_ap
from src.utils.errors import DivergenceError, NoEvaluableQueries, ShapeError
from src.utils.logger import TxtLogger
from .config import TrainConfig
from .objective import total_grads, total_loss
from .optimizer import sgd_step
from .sampler import BatchSampler, sample_batch

TRAIN_LOG_HEADER = ["epoch", "total_loss", "loss_img", "loss_txt", "coral_fc1", "coral_fc2"]
VAL_CURVE_HEADER = ["epoch", "map_i2t", "map_t2i"]

_TERMS = ("total", "loss_img", "loss_txt", "align_fc1", "align_fc2", "coral_fc1", "coral_fc2")


@dataclass(frozen=True)
class EpochRecord:
    """Per-epoch means over the steps of that epoch."""
    epoch: int
    total_loss: float
    loss_img: float
    loss_txt: float
    align_fc1: float
    align_fc2: float
    coral_fc1: float
    coral_fc2: float
    val_map_i2t: Optional[float] = None
    val_map_t2i: Optional[float] = None

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass
class TrainLog:
    records: List[EpochRecord] = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.records)

    def __iter__(self):
        return iter(self.records)

    def column(self, name: str) -> np.ndarray:
        return np.array([getattr(r, name) for r in self.records], dtype=np.float64)


def steps_per_epoch(n_img: int, n_txt: int, batch_size: int) -> int:
    # 큰 쪽 modality 한 바퀴 = 1 epoch, 작은 쪽은 재셔플해서 재사용
    return max(1, math.ceil(max(n_img, n_txt) / batch_size))


def validation_map(params: ModelParams, val_img: ModalityData, val_txt: ModalityData) -> Tuple[Optional[float], Optional[float]]:
    """Cosine MAP on the validation partition in both directions; None where nothing is scorable."""
    if len(val_img) == 0 or len(val_txt) == 0:
        return None, None
    img_index = EmbeddingIndex.from_data(params.image, val_img)
    txt_index = EmbeddingIndex.from_data(params.text, val_txt)
    maps = []
    for queries, index in ((img_index, txt_index), (txt_index, img_index)):
        try:
            maps.append(mean_ap(queries, index, Metric.COSINE).map)
        except NoEvaluableQueries:
            maps.append(None)
    return maps[0], maps[1]


def _all_finite(grads: ParamGrads) -> bool:
    return all(
        np.all(np.isfinite(g))
        for branch in (grads.image, grads.text)
        for g in (branch.dW1, branch.db1, branch.dW2, branch.db2)
    )


def _check_inputs(train_img: ModalityData, train_txt: ModalityData, num_labels: int):
    for data in (train_img, train_txt):
        if data.features.ndim != 2 or data.features.shape[0] != data.labels.shape[0]:
            raise ShapeError(f"{data.modality} features {data.features.shape} vs labels {data.labels.shape}")
        check_labels(data.labels, num_labels)


def train(train_img: ModalityData, train_txt: ModalityData, num_labels: int, config: TrainConfig,
          validation: Optional[Tuple[ModalityData, ModalityData]] = None,
          logger: Optional[TxtLogger] = None, show_progress: bool = False) -> Tuple[ModelParams, TrainLog]:
    """
    Joint training of both branches. Each step samples ``batch_size`` rows from each modality,
    runs both forwards, assembles the objective, backpropagates the alignment gradients into
    both branches and applies one momentum-SGD update. Runs exactly ``config.epochs`` epochs.
    """
    _check_inputs(train_img, train_txt, num_labels)
    params = init_model(train_img.dim, train_txt.dim, config.hidden_dim, num_labels, config.seed)
    log = TrainLog()
    if config.epochs == 0:
        return params, log

    alignment = build_alignment(config.alignment)
    img_sampler = BatchSampler(len(train_img), make_rng(config.seed, "sampler", "image"), "image")
    txt_sampler = BatchSampler(len(train_txt), make_rng(config.seed, "sampler", "text"), "text")
    pair_rng = make_rng(config.seed, "triplet")
    velocity = ParamGrads.zeros_like(params)
    n_steps = steps_per_epoch(len(train_img), len(train_txt), config.batch_size)

    progress = tqdm(range(1, config.epochs + 1), desc=f"Training ({config.alignment.kind})",
                    disable=not show_progress)
    for epoch in progress:
        sums = dict.fromkeys(_TERMS, 0.0)
        for step in range(1, n_steps + 1):
            x_img, y_img = sample_batch(train_img, config.batch_size, img_sampler)
            x_txt, y_txt = sample_batch(train_txt, config.batch_size, txt_sampler)
            img_cache = forward(params.image, x_img)
            txt_cache = forward(params.text, x_txt)

            batch = alignment.pair(y_img, y_txt, pair_rng)
            terms = total_loss(img_cache, txt_cache, y_img, y_txt, alignment, config.alignment_weight, batch)
            if not np.isfinite(terms.total):
                raise DivergenceError(epoch=epoch, step=step, value=terms.total)

            grads = total_grads(params, img_cache, txt_cache, y_img, y_txt,
                                alignment, config.alignment_weight, batch)
            if not _all_finite(grads):
                raise DivergenceError(epoch=epoch, step=step, value=float("nan"))
            params, velocity = sgd_step(params, grads, velocity, config.learning_rate, config.momentum)
            for name in _TERMS:
                sums[name] += getattr(terms, name)

        means = {name: sums[name] / n_steps for name in _TERMS}
        val_i2t = val_t2i = None
        if validation is not None:
            val_i2t, val_t2i = validation_map(params, *validation)

        record = EpochRecord(
            epoch=epoch, total_loss=means["total"],
            loss_img=means["loss_img"], loss_txt=means["loss_txt"],
            align_fc1=means["align_fc1"], align_fc2=means["align_fc2"],
            coral_fc1=means["coral_fc1"], coral_fc2=means["coral_fc2"],
            val_map_i2t=val_i2t, val_map_t2i=val_t2i,
        )
        log.records.append(record)
        progress.set_postfix(loss=f"{record.total_loss:.4f}", coral_fc2=f"{record.coral_fc2:.2e}")
        if logger is not None:
            logger.format_and_log(record.to_dict())

    return params, log


def _fmt(value: float) -> str:
    return f"{value:.12g}"


def write_train_log_csv(log: TrainLog, path: str) -> str:
    os.makedirs(os.path.dirname(path) or ".", exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="") as f:
        writer = csv.writer(f, lineterminator="\n")
        writer.writerow(TRAIN_LOG_HEADER)
        for r in log.records:
            writer.writerow([r.epoch, _fmt(r.total_loss), _fmt(r.loss_img), _fmt(r.loss_txt),
                             _fmt(r.coral_fc1), _fmt(r.coral_fc2)])
    return path


def write_val_curve_csv(log: TrainLog, path: str) -> str:
    os.makedirs(os.path.dirname(path) or ".", exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="") as f:
        writer = csv.writer(f, lineterminator="\n")
        writer.writerow(VAL_CURVE_HEADER)
        for r in log.records:
            writer.writerow([r.epoch,
                             "" if r.val_map_i2t is None else _fmt(r.val_map_i2t),
                             "" if r.val_map_t2i is None else _fmt(r.val_map_t2i)])
    return path
