# src/alignment/base_alignment.py

from abc import ABC, abstractmethod
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

from src.utils.errors import ConfigError

ALIGNMENT_NAMES = ("none", "coral", "mmd", "triplet")


@dataclass(frozen=True)
class AlignmentKind:
    """Which interactive regularizer couples the two branches, plus its parameters."""
    kind: str = "coral"
    mmd_offset: float = 1.0
    mmd_degree: int = 2
    mmd_gamma: Optional[float] = None  # None -> 1/d (scikit-learn convention)
    triplet_margin: float = 1.0

    def __post_init__(self):
        if self.kind not in ALIGNMENT_NAMES:
            raise ConfigError(f"Unknown alignment '{self.kind}'. Available: {list(ALIGNMENT_NAMES)}")
        if self.kind == "mmd" and self.mmd_degree < 1:
            raise ConfigError(f"mmd_degree must be >= 1, got {self.mmd_degree}")
        if self.kind == "mmd" and self.mmd_gamma is not None and self.mmd_gamma <= 0:
            raise ConfigError(f"mmd_gamma must be positive, got {self.mmd_gamma}")
        if self.kind == "triplet" and not self.triplet_margin > 0:
            raise ConfigError(f"triplet_margin must be > 0, got {self.triplet_margin}")


@dataclass(frozen=True)
class TripletIndex:
    anchor: np.ndarray
    positive: np.ndarray
    negative: np.ndarray

    def __len__(self) -> int:
        return int(self.anchor.shape[0])


@dataclass(frozen=True)
class AlignmentBatch:
    """
    Per-step pairing information. Only the triplet term needs more than the labels:
    ``img_to_txt`` indexes image anchors against text positives/negatives, ``txt_to_img`` the reverse.
    """
    y_img: np.ndarray
    y_txt: np.ndarray
    img_to_txt: Optional[TripletIndex] = None
    txt_to_img: Optional[TripletIndex] = None


class BaseAlignment(ABC):
    """
    모든 정렬(regularization) 항이 상속받아야 하는 추상 기본 클래스.
    loss/grad는 같은 층의 두 활성화 행렬(image batch, text batch)을 받는다.
    """
    name = "base"

    def pair(self, y_img: np.ndarray, y_txt: np.ndarray,
             rng: Optional[np.random.Generator] = None) -> AlignmentBatch:
        return AlignmentBatch(y_img=np.asarray(y_img), y_txt=np.asarray(y_txt))

    @abstractmethod
    def loss(self, img_act: np.ndarray, txt_act: np.ndarray, batch: AlignmentBatch) -> float:
        pass

    @abstractmethod
    def grad(self, img_act: np.ndarray, txt_act: np.ndarray,
             batch: AlignmentBatch) -> Tuple[np.ndarray, np.ndarray]:
        pass


class NoAlignment(BaseAlignment):
    name = "none"

    def __init__(self, kind: Optional[AlignmentKind] = None):
        self.kind = kind or AlignmentKind(kind="none")

    def loss(self, img_act, txt_act, batch) -> float:
        return 0.0

    def grad(self, img_act, txt_act, batch):
        return np.zeros_like(img_act), np.zeros_like(txt_act)
