# src/datagen/__init__.py
from .synthetic import SynthSpec, SyntheticLoader, generate, write_synthetic
