# src/data_loader/partition.py
"""
Train/validation/test partitioning.
- split: 모달리티별, 라벨별(stratified) 무작위 분할
- new_event_holdout: 특정 이벤트 라벨을 train/validation에서 제거 (test는 그대로 유지)
"""

import math
import warnings
from dataclasses import dataclass
from typing import Dict, FrozenSet, Iterable, Sequence, Tuple

from src.numerics import make_rng
from src.utils.errors import ConfigError, EmptyTraining, LabelError, SparseLabelWarning
from .records import MODALITIES, Dataset, Modality

PART_NAMES = ("train", "validation", "test")
DEFAULT_FRACTIONS = (0.6, 0.15, 0.25)

IdSets = Dict[Modality, FrozenSet[str]]


@dataclass(frozen=True)
class Partition:
    train: IdSets
    validation: IdSets
    test: IdSets

    def part(self, name: str) -> IdSets:
        if name not in PART_NAMES:
            raise ValueError(f"Unknown partition '{name}'. Available: {list(PART_NAMES)}")
        return getattr(self, name)

    def ids(self, name: str, modality: Modality) -> FrozenSet[str]:
        return self.part(name)[Modality(modality)]

    def sizes(self) -> Dict[str, Dict[str, int]]:
        return {name: {str(m): len(self.part(name)[m]) for m in MODALITIES} for name in PART_NAMES}


def _check_fractions(fractions: Sequence[float]) -> Tuple[float, float, float]:
    if len(fractions) != 3:
        raise ConfigError(f"expected (train, validation, test) fractions, got {fractions}")
    if any(f < 0 for f in fractions):
        raise ConfigError(f"fractions must be non-negative, got {fractions}")
    if abs(sum(fractions) - 1.0) > 1e-9:
        raise ConfigError(f"fractions must sum to 1, got {sum(fractions)}")
    return tuple(float(f) for f in fractions)


def _part_sizes(n: int, fractions: Tuple[float, float, float]) -> Tuple[int, int, int]:
    # 누적 floor: validation/test는 목표치 미만으로 내림, 나머지는 train으로
    _, f_val, f_test = fractions
    n_test = math.floor(n * f_test + 1e-9)
    n_val = math.floor(n * (f_val + f_test) + 1e-9) - n_test
    return n - n_val - n_test, n_val, n_test


def split(dataset: Dataset, fractions: Sequence[float] = DEFAULT_FRACTIONS, seed: int = 0) -> Partition:
    """
    Stratified-by-label random split per modality; remainders go to train; deterministic per seed.
    """
    fractions = _check_fractions(fractions)
    n_parts = sum(1 for f in fractions if f > 0)
    parts = {name: {} for name in PART_NAMES}

    for modality in MODALITIES:
        by_label: Dict[int, list] = {}
        for rec in dataset.records(modality):
            by_label.setdefault(rec.label, []).append(rec.sample_id)

        chosen = {name: set() for name in PART_NAMES}
        for label in sorted(by_label):
            ids = by_label[label]
            if len(ids) < n_parts:
                warnings.warn(
                    f"{modality} label {label} has {len(ids)} samples for {n_parts} partitions; all go to train",
                    SparseLabelWarning,
                )
                chosen["train"].update(ids)
                continue
            rng = make_rng(seed, "split", str(modality), label)
            order = [ids[i] for i in rng.permutation(len(ids))]
            n_train, n_val, _ = _part_sizes(len(ids), fractions)
            chosen["train"].update(order[:n_train])
            chosen["validation"].update(order[n_train:n_train + n_val])
            chosen["test"].update(order[n_train + n_val:])

        for name in PART_NAMES:
            parts[name][modality] = frozenset(chosen[name])

    return Partition(train=parts["train"], validation=parts["validation"], test=parts["test"])


def new_event_holdout(dataset: Dataset, held_labels: Iterable[int], base_partition: Partition) -> Partition:
    """
    Removes every held-label sample from train and validation; the test set is untouched so
    held-label test samples remain available as queries.
    """
    held = set(int(label) for label in held_labels)
    if not held:
        return base_partition
    out_of_range = sorted(l for l in held if not 0 <= l < dataset.num_labels)
    if out_of_range:
        raise LabelError(f"held labels {out_of_range} outside label space [0, {dataset.num_labels})")
    if set(dataset.labels_present()) <= held:
        raise EmptyTraining(f"holding out {sorted(held)} leaves no labels to train on")

    def _drop(id_sets: IdSets) -> IdSets:
        kept = {}
        for modality in MODALITIES:
            kept[modality] = frozenset(
                sid for sid in id_sets[modality] if dataset.get(modality, sid).label not in held
            )
        return kept

    train = _drop(base_partition.train)
    for modality in MODALITIES:
        if not train[modality]:
            raise EmptyTraining(f"holding out {sorted(held)} leaves no {modality} training samples")
    return Partition(train=train, validation=_drop(base_partition.validation), test=base_partition.test)
