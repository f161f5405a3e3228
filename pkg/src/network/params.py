# src/network/params.py

from dataclasses import dataclass
from typing import Dict

import numpy as np

from src.numerics import as_matrix, make_rng
from src.utils.errors import ParseError, ShapeError
from .branch import BranchGrads, BranchNet, forward, init_branch
from .layers import DenseLayer

MODEL_FORMAT_VERSION = 1
_BRANCHES = ("image", "text")
_TENSORS = ("fc1.W", "fc1.b", "fc2.W", "fc2.b")


@dataclass(frozen=True)
class ModelParams:
    """theta_I (image branch) and theta_T (text branch)."""
    image: BranchNet
    text: BranchNet

    def __post_init__(self):
        if self.image.num_labels != self.text.num_labels:
            raise ShapeError(
                f"branches disagree on K: image {self.image.num_labels}, text {self.text.num_labels}"
            )

    @property
    def num_labels(self) -> int:
        return self.image.num_labels

    def branch(self, modality: str) -> BranchNet:
        return self.image if str(modality) == "image" else self.text


@dataclass(frozen=True)
class ParamGrads:
    image: BranchGrads
    text: BranchGrads

    @classmethod
    def zeros_like(cls, params: ModelParams) -> "ParamGrads":
        return cls(image=BranchGrads.zeros_like(params.image), text=BranchGrads.zeros_like(params.text))


def init_model(image_dim: int, text_dim: int, hidden_dim: int, num_labels: int, seed: int) -> ModelParams:
    rng = make_rng(seed, "init")
    image = init_branch(image_dim, hidden_dim, num_labels, rng)
    text = init_branch(text_dim, hidden_dim, num_labels, rng)
    return ModelParams(image=image, text=text)


def embed(branch: BranchNet, x: np.ndarray, kind: str = "probability") -> np.ndarray:
    """Shared-space embedding: softmax output S ("probability") or logits o ("logit")."""
    cache = forward(branch, as_matrix(x, "embedding input"))
    return cache.s if str(kind) == "probability" else cache.o


def _flatten(params: ModelParams) -> Dict[str, np.ndarray]:
    arrays = {}
    for name in _BRANCHES:
        branch = getattr(params, name)
        arrays[f"{name}.fc1.W"] = branch.fc1.W
        arrays[f"{name}.fc1.b"] = branch.fc1.b
        arrays[f"{name}.fc2.W"] = branch.fc2.W
        arrays[f"{name}.fc2.b"] = branch.fc2.b
    return arrays


def save_params(params: ModelParams, path: str):
    """
    Writes a self-describing .npz: format_version, num_labels and every tensor (row-major float64).
    """
    arrays = _flatten(params)
    with open(path, 'wb') as f:
        np.savez(
            f,
            format_version=np.array(MODEL_FORMAT_VERSION, dtype=np.int64),
            num_labels=np.array(params.num_labels, dtype=np.int64),
            **{k: np.ascontiguousarray(v, dtype=np.float64) for k, v in arrays.items()},
        )


def load_params(path: str) -> ModelParams:
    try:
        data = np.load(path, allow_pickle=False)
    except (OSError, ValueError) as e:
        raise ParseError(f"not a model file: {e}", path=path)

    with data:
        version = int(data["format_version"]) if "format_version" in data.files else None
        if version != MODEL_FORMAT_VERSION:
            raise ParseError(f"unsupported model format_version {version}", path=path)
        missing = [f"{b}.{t}" for b in _BRANCHES for t in _TENSORS if f"{b}.{t}" not in data.files]
        if missing:
            raise ParseError(f"model file is missing tensors {missing}", path=path)

        branches = {}
        for name in _BRANCHES:
            branches[name] = BranchNet(
                fc1=DenseLayer(W=data[f"{name}.fc1.W"], b=data[f"{name}.fc1.b"]),
                fc2=DenseLayer(W=data[f"{name}.fc2.W"], b=data[f"{name}.fc2.b"]),
            )
        params = ModelParams(image=branches["image"], text=branches["text"])
        if int(data["num_labels"]) != params.num_labels:
            raise ParseError(
                f"num_labels {int(data['num_labels'])} disagrees with fc2 width {params.num_labels}", path=path
            )
    return params
