"""Seeded generators for the seven benchmark regression models.

Each model draws predictors X (uniform on (-1,1)^p or standard Gaussian),
maps them through a d x p matrix A built from rows of a random orthogonal
matrix (or fixed unit vectors for model 3), and evaluates a fixed nonlinear
response on Z = AX plus Gaussian noise. The transpose of A is returned as
the true reduced basis, so estimation accuracy can be scored against it.

All randomness comes from a Philox stream keyed by the ``ModelSpec`` seed
(see :mod:`goldensdr.rng`), so datasets regenerate bit-identically.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass

import numpy as np

from .linalg import orthonormal_basis
from .rng import make_rng, normal_matrix, uniform_sym

__all__ = [
    "ModelSpec",
    "GeneratedData",
    "MODEL_IDS",
    "true_dimension",
    "default_noise",
    "random_orthogonal",
    "generate",
    "write_dataset_csv",
    "read_dataset_csv",
    "write_basis_csv",
    "read_basis_csv",
]

MODEL_IDS = tuple(range(1, 8))

_D_TRUE = {1: 5, 2: 5, 3: 4, 4: 3, 5: 3, 6: 6, 7: 5}
_UNIFORM_X = {1, 2, 5, 6, 7}
_ROW_SCALES = {
    1: (1.01, 1.01, 1.02, 1.1, 1.03),
    2: (1.0, 1.0, 1.0, 1.0, 1.0),
    4: (1.0, 1.0, 1.0),
    5: (1.0, 1.0, 1.0),
    6: (1.01, 1.01, 1.02, 1.1, 1.03, 1.01),
    7: (0.01, 1.01, 1.02, 1.1, 1.03),
}

_MODEL3_BETAS = (
    np.array([1, 2, 3, 4, 0, 0, 0, 0, 0, 0], dtype=float) / np.sqrt(30.0),
    np.array([-2, 1, -4, 3, 1, 2, 0, 0, 0, 0], dtype=float) / np.sqrt(35.0),
    np.array([0, 0, 0, 0, 2, -1, 2, 1, 2, 1], dtype=float) / np.sqrt(15.0),
    np.array([0, 0, 0, 0, 0, 0, -1, -1, 1, 1], dtype=float) / 2.0,
)


def true_dimension(model_id: int) -> int:
    _check_model_id(model_id)
    return _D_TRUE[model_id]


def default_noise(model_id: int) -> float:
    """Noise multiplier printed in each model's definition (0.1 except model 3)."""
    return 0.5 if model_id == 3 else 0.1


def _check_model_id(model_id: int):
    if model_id not in _D_TRUE:
        raise ValueError(f"model_id must be in 1..7, got {model_id}")


@dataclass(frozen=True)
class ModelSpec:
    """Which model to simulate, at what size, noise level and seed."""

    model_id: int
    n: int
    p: int = 20
    noise: float | None = None  # None -> the model's printed default
    seed: int = 0

    def __post_init__(self):
        _check_model_id(self.model_id)
        if self.n < 1:
            raise ValueError("n must be >= 1")
        if self.model_id == 3:
            if self.p != 10:
                raise ValueError("model 3 is defined only for p = 10")
        elif self.p < _D_TRUE[self.model_id]:
            raise ValueError(
                f"model {self.model_id} needs p >= {_D_TRUE[self.model_id]}, got {self.p}"
            )
        if self.noise is not None and self.noise < 0:
            raise ValueError("noise must be >= 0")

    @property
    def d_true(self) -> int:
        return _D_TRUE[self.model_id]

    @property
    def effective_noise(self) -> float:
        if self.model_id == 3:
            return 0.5  # fixed by the model definition
        return default_noise(self.model_id) if self.noise is None else self.noise


@dataclass
class GeneratedData:
    x: np.ndarray
    y: np.ndarray
    beta_true: np.ndarray
    d_true: int


def random_orthogonal(p: int, seed: int) -> np.ndarray:
    """Random p x p orthogonal matrix, deterministic per seed."""
    if p < 1:
        raise ValueError("p must be >= 1")
    return orthonormal_basis(normal_matrix(make_rng(seed), p, p))


def _model1_core(z):
    z1, z2, z3, z4, z5 = (z[:, i] for i in range(5))
    return (
        z3
        - z1 * z5
        + 0.5 * z2**2
        + (z3 + 0.5 * z4) / (1.0 + z1**2)
        + np.exp(0.5 * (z3 - z4)) * np.sin(z2 - z5 + 1.5 * z3)
    )


def _model2_response(z):
    z1, z2, z3, z4, z5 = (z[:, i] for i in range(5))
    return (
        z5 / (5.0 + (1.0 - 0.2 * z3) ** 2)
        + np.exp(0.5 * z1 + z2)
        + 2.0 * z1 * z4 * z5
        + (z4 - 0.5 * z1 + z2) * np.cos(0.5 * z3)
        + 0.2 * np.sin(z1 + z5)
    )


def _model3_response(z):
    z1, z2, z3, z4 = (z[:, i] for i in range(4))
    return z1 * z2**2 + z3 * z4


def _model4_response(z):
    z1, z2, z3 = (z[:, i] for i in range(3))
    return 0.5 * z1 * z2 + np.sin(z1 - z3) + np.cos(z2 + z3)


def _model6_response(z):
    z1, z2, z3, z6 = z[:, 0], z[:, 1], z[:, 2], z[:, 5]
    return _model1_core(z) + 0.001 * z6**2 * (z1**2 + z2**2 + z3**2)


_RESPONSES = {
    1: _model1_core,
    2: _model2_response,
    3: _model3_response,
    4: _model4_response,
    5: _model4_response,
    6: _model6_response,
    7: _model1_core,
}


def response_on_reduced(model_id: int, z: np.ndarray) -> np.ndarray:
    """Noiseless response evaluated on already-reduced coordinates Z."""
    _check_model_id(model_id)
    return _RESPONSES[model_id](np.asarray(z, dtype=float))


def generate(spec: ModelSpec) -> GeneratedData:
    """Simulate one dataset; X, noise and the orthogonal V share one stream."""
    rng = make_rng(spec.seed)
    d = spec.d_true
    if spec.model_id == 3:
        a = np.stack(_MODEL3_BETAS)  # rows are the fixed direction vectors
    else:
        v = orthonormal_basis(normal_matrix(rng, spec.p, spec.p))
        a = np.array(_ROW_SCALES[spec.model_id])[:, None] * v[:d, :]
    if spec.model_id in _UNIFORM_X:
        x = uniform_sym(rng, spec.n, spec.p)
    else:
        x = normal_matrix(rng, spec.n, spec.p)
    z = x @ a.T
    noise = normal_matrix(rng, spec.n, 1)[:, 0]
    y = _RESPONSES[spec.model_id](z) + spec.effective_noise * noise
    return GeneratedData(x, y, a.T.copy(), d)


def write_dataset_csv(path, x: np.ndarray, y: np.ndarray):
    """Write samples as ``x1,...,xp,y`` rows with 17 significant digits."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow([f"x{j + 1}" for j in range(x.shape[1])] + ["y"])
        for row, resp in zip(x, y):
            writer.writerow([f"{val:.17g}" for val in row] + [f"{resp:.17g}"])


def read_dataset_csv(path):
    """Read a dataset CSV back into (x, y), with row/column diagnostics."""
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise ValueError(f"{path}: empty file") from None
        if len(header) < 2 or header[-1] != "y":
            raise ValueError(
                f"{path}: expected header 'x1,...,xp,y', got {','.join(header[:5])}..."
            )
        width = len(header)
        rows = []
        for lineno, row in enumerate(reader, start=2):
            if len(row) != width:
                raise ValueError(
                    f"{path}: line {lineno} has {len(row)} fields, expected {width}"
                )
            try:
                rows.append([float(v) for v in row])
            except ValueError:
                raise ValueError(f"{path}: line {lineno} has a non-numeric field") from None
    if not rows:
        raise ValueError(f"{path}: no data rows")
    data = np.asarray(rows)
    return data[:, :-1], data[:, -1]


def write_basis_csv(path, beta: np.ndarray):
    """Write a basis matrix as bare numeric rows (p rows, d columns)."""
    beta = np.asarray(beta, dtype=float)
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        for row in beta:
            writer.writerow([f"{val:.17g}" for val in row])


def read_basis_csv(path) -> np.ndarray:
    with open(path, newline="") as fh:
        rows = [[float(v) for v in row] for row in csv.reader(fh) if row]
    if not rows:
        raise ValueError(f"{path}: empty basis file")
    widths = {len(r) for r in rows}
    if len(widths) != 1:
        raise ValueError(f"{path}: ragged rows (widths {sorted(widths)})")
    return np.asarray(rows)
