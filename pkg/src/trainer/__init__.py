# src/trainer/__init__.py
from .config import TrainConfig
from .sampler import BatchSampler, sample_batch
from .objective import LossBreakdown, total_grads, total_loss
from .optimizer import sgd_step
from .train_loop import (
    TRAIN_LOG_HEADER, VAL_CURVE_HEADER, EpochRecord, TrainLog,
    steps_per_epoch, train, validation_map, write_train_log_csv, write_val_curve_csv,
)
