# src/trainer/sampler.py

from typing import Tuple

import numpy as np

from src.data_loader import ModalityData
from src.utils.errors import EmptyPartition


class BatchSampler:
    """
    Permutation queue over the rows of one modality. Rows are drawn without replacement
    within a pass; when a pass runs out the queue is refilled with a fresh permutation, so a
    batch larger than the modality spans a full pass plus a reshuffled continuation.
    """
    def __init__(self, num_rows: int, rng: np.random.Generator, name: str = "modality"):
        if num_rows <= 0:
            raise EmptyPartition(f"cannot sample batches from an empty {name} partition")
        self.num_rows = num_rows
        self.rng = rng
        self.passes = 0
        self._queue = np.empty(0, dtype=np.int64)

    def _refill(self):
        self._queue = np.concatenate([self._queue, self.rng.permutation(self.num_rows)])
        self.passes += 1

    def next(self, m: int) -> np.ndarray:
        while self._queue.size < m:
            self._refill()
        rows, self._queue = self._queue[:m], self._queue[m:]
        return rows


def sample_batch(data: ModalityData, m: int, sampler: BatchSampler) -> Tuple[np.ndarray, np.ndarray]:
    if len(data) == 0:
        raise EmptyPartition(f"{data.modality} partition is empty")
    rows = sampler.next(m)
    return data.features[rows], data.labels[rows]
