# src/data_loader/records.py

from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np

from src.utils.errors import DimensionMismatch, LabelError, ParseError


class Modality(str, Enum):
    IMAGE = "image"
    TEXT = "text"

    def __str__(self) -> str:
        return self.value

    @property
    def other(self) -> "Modality":
        return Modality.TEXT if self is Modality.IMAGE else Modality.IMAGE


MODALITIES = (Modality.IMAGE, Modality.TEXT)


@dataclass(frozen=True)
class SampleRecord:
    sample_id: str
    modality: Modality
    label: int
    features: np.ndarray

    @property
    def dim(self) -> int:
        return int(self.features.shape[0])


@dataclass(frozen=True)
class ModalityData:
    """Row-aligned matrix view of some records of one modality (training/eval input)."""
    modality: Modality
    ids: Tuple[str, ...]
    features: np.ndarray
    labels: np.ndarray

    def __len__(self) -> int:
        return len(self.ids)

    @property
    def dim(self) -> int:
        return int(self.features.shape[1])


@dataclass(frozen=True)
class Dataset:
    """
    Unpaired two-modality dataset. Records keep their load order; ids are unique per modality.
    """
    image: Tuple[SampleRecord, ...]
    text: Tuple[SampleRecord, ...]
    num_labels: int
    _by_id: Dict[Modality, Dict[str, int]] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        by_id = {}
        for modality in MODALITIES:
            records = self.records(modality)
            index = {}
            dim = None
            for i, rec in enumerate(records):
                if rec.modality is not modality:
                    raise ValueError(f"record '{rec.sample_id}' is tagged {rec.modality}, stored as {modality}")
                if rec.sample_id in index:
                    raise ParseError(f"duplicate {modality} id '{rec.sample_id}'")
                if not 0 <= rec.label < self.num_labels:
                    raise LabelError(f"{modality} record '{rec.sample_id}' has label {rec.label}, K={self.num_labels}")
                if dim is None:
                    dim = rec.dim
                elif rec.dim != dim:
                    raise DimensionMismatch(
                        f"{modality} record '{rec.sample_id}' has width {rec.dim}, expected {dim}",
                        record_id=rec.sample_id,
                    )
                index[rec.sample_id] = i
            by_id[modality] = index
        object.__setattr__(self, '_by_id', by_id)

    def records(self, modality: Modality) -> Tuple[SampleRecord, ...]:
        return self.image if Modality(modality) is Modality.IMAGE else self.text

    def ids(self, modality: Modality) -> List[str]:
        return [rec.sample_id for rec in self.records(modality)]

    def dim(self, modality: Modality) -> int:
        records = self.records(modality)
        return records[0].dim if records else 0

    def labels_present(self, modality: Optional[Modality] = None) -> List[int]:
        mods = MODALITIES if modality is None else (Modality(modality),)
        return sorted({rec.label for m in mods for rec in self.records(m)})

    def has(self, modality: Modality, sample_id: str) -> bool:
        return sample_id in self._by_id[Modality(modality)]

    def get(self, modality: Modality, sample_id: str) -> SampleRecord:
        return self.records(modality)[self._by_id[Modality(modality)][sample_id]]

    def select(self, modality: Modality, ids: Optional[Iterable[str]] = None) -> ModalityData:
        """
        Matrix view of ``modality`` restricted to ``ids`` (all when None), in dataset order.
        """
        modality = Modality(modality)
        records = self.records(modality)
        if ids is not None:
            wanted = set(ids)
            records = tuple(rec for rec in records if rec.sample_id in wanted)
        dim = self.dim(modality)
        features = np.vstack([rec.features for rec in records]) if records else np.zeros((0, dim))
        labels = np.array([rec.label for rec in records], dtype=np.int64)
        return ModalityData(
            modality=modality, ids=tuple(rec.sample_id for rec in records), features=features, labels=labels,
        )


def build_dataset(image: Sequence[SampleRecord], text: Sequence[SampleRecord],
                  num_labels: Optional[int] = None) -> Dataset:
    """K defaults to max label + 1 over both modalities."""
    if num_labels is None:
        labels = [rec.label for rec in list(image) + list(text)]
        num_labels = max(labels) + 1 if labels else 0
    return Dataset(image=tuple(image), text=tuple(text), num_labels=num_labels)
