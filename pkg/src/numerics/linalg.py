# src/numerics/linalg.py
"""
Dense float64 matrix helpers shared by every other package.

Matrices are plain 2-D ``numpy.ndarray`` objects (row-major, float64). Nothing here
mutates its inputs.
"""

import numpy as np

from src.utils.errors import DegenerateBatch, ShapeError


def as_matrix(values, name: str = "matrix") -> np.ndarray:
    """Validating constructor for matrices coming from outside the package."""
    arr = np.array(values, dtype=np.float64, order='C')
    if arr.ndim == 1:
        arr = arr.reshape(1, -1)
    if arr.ndim != 2:
        raise ShapeError(f"{name}: expected a 2-D matrix, got {arr.ndim} dimensions")
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{name}: contains NaN or Inf entries")
    return arr


def _check_2d(x: np.ndarray, name: str):
    if x.ndim != 2:
        raise ShapeError(f"{name}: expected a 2-D matrix, got shape {x.shape}")


def covariance(x: np.ndarray) -> np.ndarray:
    """
    Sample covariance of the columns of ``x`` (n x d): column-mean centering, 1/(n-1) normalization.
    """
    _check_2d(x, "covariance input")
    n = x.shape[0]
    if n < 2:
        raise DegenerateBatch(f"covariance needs at least 2 rows, got {n}")
    centered = x - x.mean(axis=0, keepdims=True)
    cov = centered.T @ centered / (n - 1)
    # 수치 오차로 생기는 비대칭 제거
    return 0.5 * (cov + cov.T)


def frob_sq_diff(a: np.ndarray, b: np.ndarray) -> float:
    """Squared Frobenius norm of ``a - b``."""
    if a.shape != b.shape:
        raise ShapeError(f"frob_sq_diff: shape mismatch {a.shape} vs {b.shape}")
    diff = a - b
    return float(np.sum(diff * diff))


def matmul(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    _check_2d(a, "matmul lhs")
    _check_2d(b, "matmul rhs")
    if a.shape[1] != b.shape[0]:
        raise ShapeError(f"matmul: cannot multiply {a.shape} by {b.shape}")
    return a @ b


def transpose(a: np.ndarray) -> np.ndarray:
    _check_2d(a, "transpose input")
    return np.ascontiguousarray(a.T)


def add(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    if a.shape != b.shape:
        raise ShapeError(f"add: shape mismatch {a.shape} vs {b.shape}")
    return a + b


def scale(a: np.ndarray, c: float) -> np.ndarray:
    return a * float(c)
