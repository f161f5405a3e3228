# src/numerics/__init__.py

from .linalg import as_matrix, covariance, frob_sq_diff, matmul, transpose, add, scale
from .rng import make_rng, seed_words

__all__ = [
    'as_matrix', 'covariance', 'frob_sq_diff',
    'matmul', 'transpose', 'add', 'scale',
    'make_rng', 'seed_words',
]
