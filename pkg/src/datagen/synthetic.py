# src/datagen/synthetic.py
"""
Synthetic unpaired image/text dataset.

Each event label k gets a latent prototype z_k. Every modality owns a fixed random linear
map A_m into its feature space, and a sample of label k is A_m z_k + sigma * noise. The two
modalities share only the prototypes, never individual samples, and have independent counts.

With ``event_group > 1`` consecutive labels form related events: they share a topic centre c
and z_k = c + event_spread * eps_k. An event held out of training then lands on the region of
its seen sibling instead of an empty part of the space.
"""

from dataclasses import asdict, dataclass

import numpy as np

from src.data_loader import BaseDataLoader, Dataset, Modality, SampleRecord, build_dataset, write_manifest
from src.numerics import make_rng
from src.utils.errors import ConfigError


@dataclass(frozen=True)
class SynthSpec:
    num_labels: int = 5
    n_image: int = 200
    n_text: int = 200
    image_dim: int = 64
    text_dim: int = 100
    sigma: float = 0.1
    latent_dim: int = 16
    event_group: int = 1
    event_spread: float = 0.1
    seed: int = 42

    def __post_init__(self):
        if self.num_labels < 2:
            raise ConfigError(f"num_labels must be >= 2, got {self.num_labels}")
        if not self.sigma > 0:
            raise ConfigError(f"sigma must be > 0, got {self.sigma}")
        if self.image_dim < 2 or self.text_dim < 2 or self.latent_dim < 2:
            raise ConfigError(
                f"dims must be >= 2, got image {self.image_dim}, text {self.text_dim}, latent {self.latent_dim}"
            )
        if self.n_image < 0 or self.n_text < 0:
            raise ConfigError("sample counts must be non-negative")
        if self.event_group < 1:
            raise ConfigError(f"event_group must be >= 1, got {self.event_group}")
        if self.event_spread < 0:
            raise ConfigError(f"event_spread must be >= 0, got {self.event_spread}")

    def to_dict(self):
        return asdict(self)


def _balanced_labels(n: int, num_labels: int, rng: np.random.Generator) -> np.ndarray:
    # 라벨별 개수 차이는 최대 1
    return rng.permutation(np.arange(n) % num_labels)


def _sample_modality(modality: Modality, n: int, dim: int, prototypes: np.ndarray,
                     spec: SynthSpec) -> list:
    rng = make_rng(spec.seed, "datagen", str(modality))
    projection = rng.normal(0.0, 1.0 / np.sqrt(spec.latent_dim), size=(dim, spec.latent_dim))
    labels = _balanced_labels(n, spec.num_labels, rng)
    noise = rng.normal(0.0, spec.sigma, size=(n, dim))
    features = prototypes[labels] @ projection.T + noise

    prefix = "img" if modality is Modality.IMAGE else "txt"
    return [
        SampleRecord(sample_id=f"{prefix}_{i:05d}", modality=modality, label=int(labels[i]), features=features[i])
        for i in range(n)
    ]


def _prototypes(spec: SynthSpec) -> np.ndarray:
    rng = make_rng(spec.seed, "datagen", "prototypes")
    if spec.event_group == 1:
        return rng.normal(0.0, 1.0, size=(spec.num_labels, spec.latent_dim))
    # label k 는 topic k // event_group 에 속함
    n_topics = -(-spec.num_labels // spec.event_group)
    topics = rng.normal(0.0, 1.0, size=(n_topics, spec.latent_dim))
    offsets = rng.normal(0.0, 1.0, size=(spec.num_labels, spec.latent_dim))
    return topics[np.arange(spec.num_labels) // spec.event_group] + spec.event_spread * offsets


def generate(spec: SynthSpec) -> Dataset:
    prototypes = _prototypes(spec)
    image = _sample_modality(Modality.IMAGE, spec.n_image, spec.image_dim, prototypes, spec)
    text = _sample_modality(Modality.TEXT, spec.n_text, spec.text_dim, prototypes, spec)
    return build_dataset(image, text, num_labels=spec.num_labels)


def write_synthetic(spec: SynthSpec, out_dir: str) -> str:
    """Generates the dataset and writes it in the manifest + feature-file formats."""
    return write_manifest(generate(spec), out_dir)


class SyntheticLoader(BaseDataLoader):
    source_name = "synthetic"

    def load_data(self) -> Dataset:
        spec = self.config.synth_spec()
        dataset = generate(spec)
        print(f"✅ Generated synthetic dataset: K={spec.num_labels}, "
              f"{spec.n_image} image / {spec.n_text} text samples (seed={spec.seed})")
        return dataset
