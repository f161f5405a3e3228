# src/numerics/rng.py
"""
Seeded randomness.

Every stochastic consumer gets its own ``numpy.random.Generator`` (PCG64) derived from the
single run seed plus a tuple of keys::

    SeedSequence([seed, key_word_1, key_word_2, ...])

Integer keys are used as-is (must be non-negative); string keys are mixed in as their CRC32
checksum. The same (seed, keys) gives the same stream on every platform numpy supports.
"""

import zlib
from typing import List, Union

import numpy as np

Key = Union[int, str]


def _key_word(key: Key) -> int:
    if isinstance(key, str):
        return zlib.crc32(key.encode('utf-8'))
    if key < 0:
        raise ValueError(f"rng keys must be non-negative, got {key}")
    return int(key)


def seed_words(seed: int, *keys: Key) -> List[int]:
    if seed < 0 or seed >= 2 ** 64:
        raise ValueError(f"seed must be an unsigned 64-bit integer, got {seed}")
    return [int(seed)] + [_key_word(k) for k in keys]


def make_rng(seed: int, *keys: Key) -> np.random.Generator:
    """Generator for the stream named by ``keys`` under run seed ``seed``."""
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed_words(seed, *keys))))
