# src/trainer/config.py

from dataclasses import asdict, dataclass, field

from src.alignment import AlignmentKind
from src.utils.errors import ConfigError


@dataclass(frozen=True)
class TrainConfig:
    batch_size: int = 64
    learning_rate: float = 0.01
    momentum: float = 0.9
    epochs: int = 50
    hidden_dim: int = 1000
    alignment: AlignmentKind = field(default_factory=AlignmentKind)
    alignment_weight: float = 1.0
    seed: int = 42

    def __post_init__(self):
        # CORAL 공분산은 최소 2개 행 필요
        if self.batch_size < 2:
            raise ConfigError(f"batch_size must be >= 2, got {self.batch_size}")
        if not self.learning_rate > 0:
            raise ConfigError(f"learning_rate must be > 0, got {self.learning_rate}")
        if not 0 <= self.momentum < 1:
            raise ConfigError(f"momentum must be in [0, 1), got {self.momentum}")
        if self.epochs < 0:
            raise ConfigError(f"epochs must be >= 0, got {self.epochs}")
        if self.hidden_dim < 1:
            raise ConfigError(f"hidden_dim must be >= 1, got {self.hidden_dim}")
        if self.alignment_weight < 0:
            raise ConfigError(f"alignment_weight must be >= 0, got {self.alignment_weight}")

    def to_dict(self) -> dict:
        flat = asdict(self)
        kind = flat.pop("alignment")
        flat["alignment"] = kind["kind"]
        flat.update({k: v for k, v in kind.items() if k != "kind"})
        return flat
