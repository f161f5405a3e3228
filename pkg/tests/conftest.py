# tests/conftest.py

import numpy as np
import pytest

from src.datagen import SynthSpec, generate
from src.network import init_model
from src.utils.config import RunConfig


@pytest.fixture
def rng():
    return np.random.default_rng(0)


@pytest.fixture
def small_spec():
    return SynthSpec(num_labels=3, n_image=30, n_text=24, image_dim=6, text_dim=8,
                     sigma=0.1, latent_dim=4, seed=7)


@pytest.fixture
def small_dataset(small_spec):
    return generate(small_spec)


@pytest.fixture
def tiny_params():
    return init_model(image_dim=6, text_dim=8, hidden_dim=5, num_labels=3, seed=0)


@pytest.fixture
def small_run_config(tmp_path):
    """Desk-sized synthetic run writing under tmp_path."""
    return RunConfig(
        experiment_name="unit", output_dir=str(tmp_path),
        num_labels=3, n_image=30, n_text=24, image_dim=6, text_dim=8, latent_dim=4,
        epochs=3, batch_size=8, hidden_dim=16, show_progress=False,
    )
