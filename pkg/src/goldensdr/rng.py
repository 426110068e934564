"""Deterministic random streams.

All randomness in the package flows through counter-based Philox (4x64)
bit generators keyed directly by a 64-bit seed, with normal variates drawn
by the Box-Muller transform on top of the uniform stream. Both pieces are
platform independent, so a seed pins down every dataset, initialization and
shuffle bit-for-bit.

Seed derivations (all arithmetic mod 2**64):

* restart ``j`` of a training run:  ``seed ^ (j * 0x9E3779B97F4A7C15)``
* replication ``i`` of an experiment: ``seed + i * 0x9E3779B9``
* benchmark cell ``c``: ``seed + c * 0x9E3779B97F4A7C15``
* train/validation shuffle: ``seed ^ 0xC2B2AE3D27D4EB4F``
"""

from __future__ import annotations

import numpy as np
from numpy.random import Generator, Philox

_MASK64 = (1 << 64) - 1
GOLDEN64 = 0x9E3779B97F4A7C15
GOLDEN32 = 0x9E3779B9
_SPLIT_SALT = 0xC2B2AE3D27D4EB4F


def make_rng(seed: int) -> Generator:
    """Philox generator keyed by ``seed`` (counter starts at zero)."""
    return Generator(Philox(key=int(seed) & _MASK64))


def restart_seed(base_seed: int, restart_index: int) -> int:
    return (int(base_seed) ^ (restart_index * GOLDEN64)) & _MASK64


def replication_seed(base_seed: int, rep_index: int) -> int:
    return (int(base_seed) + rep_index * GOLDEN32) & _MASK64


def cell_seed(base_seed: int, cell_index: int) -> int:
    return (int(base_seed) + cell_index * GOLDEN64) & _MASK64


def split_seed(seed: int) -> int:
    return (int(seed) ^ _SPLIT_SALT) & _MASK64


def standard_normal(rng: Generator, size: int) -> np.ndarray:
    """Standard normal draws via Box-Muller on the uniform stream."""
    pairs = (size + 1) // 2
    u1 = 1.0 - rng.random(pairs)  # (0, 1]: keeps log() finite
    u2 = rng.random(pairs)
    radius = np.sqrt(-2.0 * np.log(u1))
    angle = 2.0 * np.pi * u2
    out = np.empty(2 * pairs)
    out[0::2] = radius * np.cos(angle)
    out[1::2] = radius * np.sin(angle)
    return out[:size]


def normal_matrix(rng: Generator, rows: int, cols: int) -> np.ndarray:
    return standard_normal(rng, rows * cols).reshape(rows, cols)


def uniform_sym(rng: Generator, rows: int, cols: int) -> np.ndarray:
    """Uniform(-1, 1) matrix."""
    return 2.0 * rng.random((rows, cols)) - 1.0
