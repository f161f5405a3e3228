# src/utils/config.py
"""
Flat run configuration.

A config file is a YAML mapping of ``key: value`` pairs (scalars, or lists of scalars for the
list-valued keys). Unknown keys and nested mappings are rejected; command-line flags override
file values. All randomness in a run derives from ``seed``.
"""

import os
from dataclasses import asdict, dataclass, field, fields, replace
from typing import Any, Dict, List, Optional

import yaml

from src.alignment import ALIGNMENT_NAMES, AlignmentKind
from src.datagen import SynthSpec
from src.retrieval import METRIC_ORDER, parse_metric
from src.trainer import TrainConfig
from src.utils.errors import ConfigError

DATA_SOURCES = ("synthetic", "manifest")
DIRECTION_NAMES = ("i2t", "t2i")
_LIST_KEYS = {"held_labels", "split_fractions", "metric"}
_NULLABLE_KEYS = {"manifest", "mmd_gamma", "model", "eval_depth"}


def default_output_dir() -> str:
    return os.getenv("S3CA_OUTPUT_DIR", "./outputs")


@dataclass(frozen=True)
class RunConfig:
    experiment_name: str = "s3ca"
    output_dir: str = field(default_factory=default_output_dir)

    # data
    data_source: str = "synthetic"
    manifest: Optional[str] = None
    split_fractions: List[float] = field(default_factory=lambda: [0.6, 0.15, 0.25])
    held_labels: List[int] = field(default_factory=list)

    # synthetic generator
    num_labels: int = 5
    n_image: int = 200
    n_text: int = 200
    image_dim: int = 64
    text_dim: int = 100
    sigma: float = 0.1
    latent_dim: int = 16
    event_group: int = 1
    event_spread: float = 0.1

    # training
    seed: int = 42
    batch_size: int = 64
    learning_rate: float = 0.01
    momentum: float = 0.9
    epochs: int = 50
    hidden_dim: int = 1000
    alignment: str = "coral"
    alignment_weight: float = 1.0
    mmd_offset: float = 1.0
    mmd_degree: int = 2
    mmd_gamma: Optional[float] = None
    triplet_margin: float = 1.0
    monitor_validation: bool = False

    # evaluation / retrieval
    model: Optional[str] = None
    metric: Any = "cosine"
    direction: str = "both"
    embedding_kind: str = "probability"
    eval_depth: Optional[int] = None
    per_query: bool = False
    top_k: int = 10
    max_workers: int = 1
    show_progress: bool = True

    def __post_init__(self):
        if self.data_source not in DATA_SOURCES:
            raise ConfigError(f"Unknown data_source '{self.data_source}'. Available: {list(DATA_SOURCES)}")
        if self.alignment not in ALIGNMENT_NAMES:
            raise ConfigError(f"Unknown alignment '{self.alignment}'. Available: {list(ALIGNMENT_NAMES)}")
        if self.direction not in DIRECTION_NAMES + ("both",):
            raise ConfigError(f"direction must be one of i2t, t2i, both; got '{self.direction}'")
        if self.embedding_kind not in ("probability", "logit"):
            raise ConfigError(f"embedding_kind must be 'probability' or 'logit', got '{self.embedding_kind}'")
        if len(self.split_fractions) != 3:
            raise ConfigError(f"split_fractions needs three values (train, validation, test), got {self.split_fractions}")
        if any(f < 0 for f in self.split_fractions) or abs(sum(self.split_fractions) - 1.0) > 1e-9:
            raise ConfigError(f"split_fractions must be non-negative and sum to 1, got {self.split_fractions}")
        if self.eval_depth is not None and self.eval_depth < 1:
            raise ConfigError(f"eval_depth must be >= 1, got {self.eval_depth}")
        if self.top_k < 1:
            raise ConfigError(f"top_k must be >= 1, got {self.top_k}")
        if self.max_workers < 1:
            raise ConfigError(f"max_workers must be >= 1, got {self.max_workers}")
        self.metrics()

    # --- 하위 설정 객체 ---
    def alignment_kind(self) -> AlignmentKind:
        return AlignmentKind(
            kind=self.alignment, mmd_offset=self.mmd_offset, mmd_degree=self.mmd_degree,
            mmd_gamma=self.mmd_gamma, triplet_margin=self.triplet_margin,
        )

    def train_config(self) -> TrainConfig:
        return TrainConfig(
            batch_size=self.batch_size, learning_rate=self.learning_rate, momentum=self.momentum,
            epochs=self.epochs, hidden_dim=self.hidden_dim, alignment=self.alignment_kind(),
            alignment_weight=self.alignment_weight, seed=self.seed,
        )

    def synth_spec(self) -> SynthSpec:
        return SynthSpec(
            num_labels=self.num_labels, n_image=self.n_image, n_text=self.n_text,
            image_dim=self.image_dim, text_dim=self.text_dim, sigma=self.sigma,
            latent_dim=self.latent_dim, event_group=self.event_group, event_spread=self.event_spread,
            seed=self.seed,
        )

    def metrics(self) -> list:
        names = self.metric if isinstance(self.metric, list) else [self.metric]
        if any(str(n).lower() == "all" for n in names):
            return list(METRIC_ORDER)
        return [parse_metric(n) for n in names]

    def directions(self) -> List[str]:
        return list(DIRECTION_NAMES) if self.direction == "both" else [self.direction]

    def run_dir(self) -> str:
        return os.path.join(self.output_dir, self.experiment_name)

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)


_FIELDS = {f.name: f for f in fields(RunConfig)}


def _is_scalar(value) -> bool:
    return value is None or isinstance(value, (str, int, float, bool))


def _coerce_list(key: str, value):
    if key == "metric" and _is_scalar(value):
        return str(value)
    if key == "held_labels" and isinstance(value, (int, str)) and not isinstance(value, bool):
        value = [v for v in str(value).split(",") if v.strip()]
    if not isinstance(value, list) or not all(_is_scalar(v) for v in value):
        raise ConfigError(f"'{key}' must be a flat list of scalars, got {value!r}")
    cast = {"held_labels": int, "split_fractions": float}.get(key, str)
    try:
        return [cast(v) for v in value]
    except (TypeError, ValueError):
        raise ConfigError(f"invalid entry in '{key}': {value!r}")


def _coerce(key: str, value):
    default = getattr(RunConfig(), key)
    if value is None:
        if key not in _NULLABLE_KEYS:
            raise ConfigError(f"'{key}' must have a value (got null)")
        return None
    if key in _LIST_KEYS:
        return _coerce_list(key, value)
    if not _is_scalar(value):
        raise ConfigError(f"nested value for '{key}' is not allowed: {value!r}")
    try:
        if isinstance(default, bool):
            if isinstance(value, str):
                return value.strip().lower() in ("1", "true", "yes", "on")
            return bool(value)
        if isinstance(default, int):
            if isinstance(value, float) and not value.is_integer():
                raise ValueError(value)
            return int(value)
        if isinstance(default, float) or key == "mmd_gamma":
            return float(value)
        if key == "eval_depth":
            return int(value)
    except (TypeError, ValueError):
        raise ConfigError(f"invalid value for '{key}': {value!r}")
    return str(value)


def load_run_config(path: Optional[str] = None, overrides: Optional[Dict[str, Any]] = None) -> RunConfig:
    """
    Reads a flat YAML config (or starts from defaults when ``path`` is None) and applies
    ``overrides``; ``None`` override values are ignored.
    """
    raw: Dict[str, Any] = {}
    if path is not None:
        if not os.path.isfile(path):
            raise ConfigError(f"config file not found: {path}")
        with open(path, "r", encoding="utf-8") as f:
            try:
                loaded = yaml.safe_load(f)
            except yaml.YAMLError as e:
                raise ConfigError(f"{path}: not valid YAML ({e})")
        if loaded is None:
            loaded = {}
        if not isinstance(loaded, dict):
            raise ConfigError(f"{path}: config must be a key/value mapping")
        raw.update(loaded)

    for key, value in (overrides or {}).items():
        if value is not None:
            raw[key] = value

    unknown = sorted(k for k in raw if k not in _FIELDS)
    if unknown:
        raise ConfigError(f"unknown config keys: {unknown}")

    values = {key: _coerce(key, value) for key, value in raw.items()}
    config = RunConfig(**values)
    if path is not None:
        config = _resolve_paths(config, os.path.dirname(os.path.abspath(path)))
    return config


def _resolve_paths(config: RunConfig, base_dir: str) -> RunConfig:
    # config 파일 기준 상대경로 (단, 현재 위치에 이미 있으면 그대로)
    updates = {}
    for key in ("manifest", "model"):
        value = getattr(config, key)
        if value and not os.path.isabs(value) and not os.path.exists(value):
            candidate = os.path.join(base_dir, value)
            if os.path.exists(candidate):
                updates[key] = candidate
    return replace(config, **updates) if updates else config


def require_path(config: RunConfig, key: str) -> str:
    """Validates that the path stored under ``key`` is set and exists before work starts."""
    value = getattr(config, key)
    if not value:
        raise ConfigError(f"'{key}' is required for this command")
    if not os.path.exists(value):
        raise ConfigError(f"'{key}' path does not exist: {value}")
    return value
