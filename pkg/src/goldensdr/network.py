"""Two-hidden-layer regression network with an identity first layer.

The architecture is

    f(x) = tau0 + sum_i tau_i * phi(u_i . (w^T x) + v_i)

where the first layer is linear with no bias, so its weight matrix ``w``
(p x k) is exactly the projection whose column span estimates the reduced
predictor subspace. Training minimizes mean squared error plus an L1 penalty
on all parameters, via full-batch adaptive-moment descent with a proximal
soft-threshold step so the penalty is handled exactly.
"""

from __future__ import annotations

import json
import warnings
from dataclasses import dataclass

import numpy as np

from .linalg import as_matrix, as_vector
from .rng import make_rng, restart_seed, split_seed

__all__ = [
    "ACTIVATIONS",
    "NetworkParams",
    "TrainConfig",
    "Standardization",
    "DataSplit",
    "FittedModel",
    "NnlResult",
    "TrainingDivergedError",
    "forward",
    "loss_and_gradient",
    "train_once",
    "nnl",
    "split_train_val",
    "forward_cost",
]


def _logistic(z):
    with np.errstate(over="ignore"):
        return 1.0 / (1.0 + np.exp(-z))


def _logistic_into(z, out):
    with np.errstate(over="ignore"):
        np.negative(z, out=out)
        np.exp(out, out=out)
        out += 1.0
        np.reciprocal(out, out=out)


def _tanh_deriv_into(a, out):
    np.multiply(a, a, out=out)
    np.subtract(1.0, out, out=out)


def _logistic_deriv_into(a, out):
    np.subtract(1.0, a, out=out)
    out *= a


@dataclass(frozen=True)
class _Activation:
    """A sigmoidal activation with allocating and in-place kernels.

    ``deriv_into`` writes phi'(z) expressed through the activation output a,
    so the forward pass result is all the backward pass needs.
    """

    apply: object
    apply_into: object
    deriv_into: object


ACTIVATIONS = {
    "tanh": _Activation(np.tanh, lambda z, out: np.tanh(z, out=out), _tanh_deriv_into),
    "logistic": _Activation(_logistic, _logistic_into, _logistic_deriv_into),
}


class TrainingDivergedError(ArithmeticError):
    """Raised when the training loss stops being finite.

    ``epoch`` is the 1-based epoch at which divergence was detected.
    """

    def __init__(self, epoch: int):
        self.epoch = epoch
        super().__init__(f"training loss became non-finite at epoch {epoch}")


@dataclass
class NetworkParams:
    """All weights of the network. ``w`` is p x k, ``u`` is k x m."""

    w: np.ndarray
    u: np.ndarray
    v: np.ndarray
    tau: np.ndarray
    tau0: float

    def __post_init__(self):
        self.w = as_matrix(self.w, "w")
        self.u = as_matrix(self.u, "u")
        self.v = as_vector(self.v, "v")
        self.tau = as_vector(self.tau, "tau")
        self.tau0 = float(self.tau0)
        if not np.isfinite(self.tau0):
            raise ValueError("tau0 is not finite")
        if self.w.shape[1] != self.u.shape[0]:
            raise ValueError(
                f"w has {self.w.shape[1]} columns but u has {self.u.shape[0]} rows"
            )
        if not (self.u.shape[1] == self.v.size == self.tau.size):
            raise ValueError(
                f"second-layer width mismatch: u {self.u.shape}, "
                f"v {self.v.size}, tau {self.tau.size}"
            )

    @property
    def p(self) -> int:
        return self.w.shape[0]

    @property
    def k(self) -> int:
        return self.w.shape[1]

    @property
    def m(self) -> int:
        return self.u.shape[1]

    def copy(self) -> "NetworkParams":
        return NetworkParams(
            self.w.copy(), self.u.copy(), self.v.copy(), self.tau.copy(), self.tau0
        )


@dataclass(frozen=True)
class TrainConfig:
    """Knobs for a single network fit (and its restarts)."""

    m: int = 20
    restarts: int = 3
    l1: float = 1e-3
    learning_rate: float = 0.01
    epochs: int = 2000
    activation: str = "tanh"
    standardize: bool = True
    seed: int = 0

    def __post_init__(self):
        if self.epochs < 1:
            raise ValueError("epochs must be >= 1")
        if self.restarts < 1:
            raise ValueError("restarts must be >= 1")
        if self.learning_rate <= 0:
            raise ValueError("learning_rate must be > 0")
        if self.l1 < 0:
            raise ValueError("l1 must be >= 0")
        if self.activation not in ACTIVATIONS:
            raise ValueError(f"unknown activation {self.activation!r}")


@dataclass(frozen=True)
class Standardization:
    """Per-feature affine transform fitted on the training split only."""

    means: np.ndarray
    scales: np.ndarray
    y_mean: float
    y_scale: float

    @classmethod
    def fit(cls, x: np.ndarray, y: np.ndarray) -> "Standardization":
        scales = x.std(axis=0)
        scales = np.where(scales > 0, scales, 1.0)
        y_scale = float(y.std())
        return cls(x.mean(axis=0), scales, float(y.mean()), y_scale if y_scale > 0 else 1.0)

    @classmethod
    def identity(cls, p: int) -> "Standardization":
        return cls(np.zeros(p), np.ones(p), 0.0, 1.0)

    def apply_x(self, x: np.ndarray) -> np.ndarray:
        return (x - self.means) / self.scales

    def apply_y(self, y: np.ndarray) -> np.ndarray:
        return (y - self.y_mean) / self.y_scale

    def invert_y(self, y_std: np.ndarray) -> np.ndarray:
        return y_std * self.y_scale + self.y_mean


class DataSplit:
    """Train/validation(/test) predictor matrices and responses.

    The standardization record is computed from the training split at
    construction; whether it is used is decided by ``TrainConfig.standardize``.
    """

    def __init__(self, x_train, y_train, x_val, y_val, x_test=None, y_test=None):
        self.x_train = as_matrix(x_train, "x_train")
        self.y_train = as_vector(y_train, "y_train")
        self.x_val = as_matrix(x_val, "x_val")
        self.y_val = as_vector(y_val, "y_val")
        self.x_test = None if x_test is None else as_matrix(x_test, "x_test")
        self.y_test = None if y_test is None else as_vector(y_test, "y_test")
        for xs, ys, name in [
            (self.x_train, self.y_train, "train"),
            (self.x_val, self.y_val, "val"),
            (self.x_test, self.y_test, "test"),
        ]:
            if xs is None:
                continue
            if xs.shape[0] != ys.size:
                raise ValueError(f"{name}: {xs.shape[0]} rows vs {ys.size} responses")
            if xs.shape[1] != self.x_train.shape[1]:
                raise ValueError(f"{name}: feature count differs from training split")
        if self.n_val == 0:
            raise ValueError("validation split is empty")
        n, n_va = self.n_train, self.n_val
        if not 0.1 * n <= n_va <= 0.3 * n:
            warnings.warn(
                f"validation size {n_va} outside the recommended [0.1, 0.3] "
                f"fraction of the {n} training samples",
                stacklevel=2,
            )
        self.standardization = Standardization.fit(self.x_train, self.y_train)

    @property
    def p(self) -> int:
        return self.x_train.shape[1]

    @property
    def n_train(self) -> int:
        return self.x_train.shape[0]

    @property
    def n_val(self) -> int:
        return self.x_val.shape[0]


def split_train_val(x, y, val_frac: float = 0.2, seed: int = 0,
                    x_test=None, y_test=None) -> DataSplit:
    """Split rows into train/validation by a seeded shuffle.

    The permutation protects against ordered input files; it is drawn from
    its own salted stream so it cannot collide with training randomness.
    """
    x = as_matrix(x, "x")
    y = as_vector(y, "y")
    if x.shape[0] != y.size:
        raise ValueError(f"{x.shape[0]} rows vs {y.size} responses")
    if not 0.0 < val_frac < 1.0:
        raise ValueError("val_frac must be in (0, 1)")
    n = y.size
    n_va = min(max(int(round(val_frac * n)), 1), n - 1)
    perm = make_rng(split_seed(seed)).permutation(n)
    val_idx, train_idx = perm[:n_va], perm[n_va:]
    return DataSplit(x[train_idx], y[train_idx], x[val_idx], y[val_idx],
                     x_test, y_test)


def _batch_forward(w, u, v, tau, tau0, x, act: _Activation):
    hidden = x @ w
    activ = act.apply(hidden @ u + v)
    return activ @ tau + tau0


def forward(params: NetworkParams, x, activation: str = "tanh") -> float:
    """Evaluate the network on a single input vector."""
    x = as_vector(x, "x")
    if x.size != params.p:
        raise ValueError(f"input has length {x.size}, expected {params.p}")
    act = ACTIVATIONS[activation]
    return float(
        _batch_forward(params.w, params.u, params.v, params.tau, params.tau0, x[None, :], act)[0]
    )


class _Buffers:
    """Preallocated batch-sized arrays for the training loop.

    Reusing them keeps every epoch free of large temporary allocations,
    which the allocator would otherwise serve by mmap once they pass ~128 kB
    and make the per-epoch cost superlinear in the batch size.
    """

    def __init__(self, n, k, m):
        self.hidden = np.empty((n, k))
        self.pre = np.empty((n, m))
        self.act = np.empty((n, m))
        self.dact = np.empty((n, m))
        self.resid = np.empty(n)
        self.gout = np.empty(n)
        self.dhidden = np.empty((n, k))


def _forward_into(bufs, w, u, v, tau, tau0, x, act: _Activation):
    """Forward pass into ``bufs``; returns predictions aliased to bufs.resid."""
    np.dot(x, w, out=bufs.hidden)
    np.dot(bufs.hidden, u, out=bufs.pre)
    bufs.pre += v
    act.apply_into(bufs.pre, bufs.act)
    np.dot(bufs.act, tau, out=bufs.resid)
    bufs.resid += tau0
    return bufs.resid


def _smooth_loss_grads(w, u, v, tau, tau0, x, y, act: _Activation, bufs=None):
    """Mean-squared-error loss and its exact gradients."""
    n = x.shape[0]
    if bufs is None:
        bufs = _Buffers(n, w.shape[1], u.shape[1])
    resid = _forward_into(bufs, w, u, v, tau, tau0, x, act)
    resid -= y
    loss = float(resid @ resid) / n
    np.multiply(resid, 2.0 / n, out=bufs.gout)
    g_tau = bufs.act.T @ bufs.gout
    g_tau0 = float(bufs.gout.sum())
    act.deriv_into(bufs.act, bufs.dact)
    bufs.dact *= tau
    bufs.dact *= bufs.gout[:, None]
    g_v = bufs.dact.sum(axis=0)
    g_u = bufs.hidden.T @ bufs.dact
    np.dot(bufs.dact, u.T, out=bufs.dhidden)
    g_w = x.T @ bufs.dhidden
    return loss, g_w, g_u, g_v, g_tau, g_tau0


def _l1_norm(params: NetworkParams) -> float:
    return float(
        np.abs(params.w).sum()
        + np.abs(params.u).sum()
        + np.abs(params.v).sum()
        + np.abs(params.tau).sum()
        + abs(params.tau0)
    )


def loss_and_gradient(params: NetworkParams, x_batch, y_batch, l1: float,
                      activation: str = "tanh"):
    """L1-penalized squared-error loss and its (sub)gradient.

    The penalty covers every parameter including the output bias; the
    subgradient uses sign(0) = 0.
    """
    x = as_matrix(x_batch, "x_batch")
    y = as_vector(y_batch, "y_batch")
    if x.shape[0] == 0:
        raise ValueError("batch is empty")
    if x.shape[0] != y.size:
        raise ValueError(f"{x.shape[0]} rows vs {y.size} responses")
    if x.shape[1] != params.p:
        raise ValueError(f"batch has {x.shape[1]} features, expected {params.p}")
    loss, g_w, g_u, g_v, g_tau, g_tau0 = _smooth_loss_grads(
        params.w, params.u, params.v, params.tau, params.tau0, x, y,
        ACTIVATIONS[activation],
    )
    loss += l1 * _l1_norm(params)
    grads = NetworkParams(
        g_w + l1 * np.sign(params.w),
        g_u + l1 * np.sign(params.u),
        g_v + l1 * np.sign(params.v),
        g_tau + l1 * np.sign(params.tau),
        g_tau0 + l1 * np.sign(params.tau0),
    )
    return loss, grads


def _glorot(rng, rows, cols):
    limit = np.sqrt(6.0 / (rows + cols))
    return limit * (2.0 * rng.random((rows, cols)) - 1.0)


def _soft_threshold(a, t):
    np.copyto(a, np.sign(a) * np.maximum(np.abs(a) - t, 0.0))


def train_once(data: DataSplit, k: int, cfg: TrainConfig, restart_seed: int):
    """One seeded training run; returns (fitted model, validation MSE).

    Initialization is fan-in-scaled uniform for the weight matrices (biases
    start at zero). Each adaptive-moment step is followed by a proximal
    soft-threshold of size ``learning_rate * l1`` on everything except the
    output bias. The parameters returned are the snapshot with the lowest
    validation MSE seen over the epochs; the reported MSE is on the original
    response scale.
    """
    p = data.p
    if not 1 <= k <= p:
        raise ValueError(f"k must be in [1, {p}], got {k}")
    std = data.standardization if cfg.standardize else Standardization.identity(p)
    x_tr = std.apply_x(data.x_train)
    y_tr = std.apply_y(data.y_train)
    x_va = std.apply_x(data.x_val)
    y_va = std.apply_y(data.y_val)
    act = ACTIVATIONS[cfg.activation]

    rng = make_rng(restart_seed)
    m = cfg.m
    w = _glorot(rng, p, k)
    u = _glorot(rng, k, m)
    tau = _glorot(rng, m, 1)[:, 0]
    v = np.zeros(m)
    tau0 = 0.0

    arrays = [w, u, v, tau]
    moment1 = [np.zeros_like(a) for a in arrays] + [0.0]
    moment2 = [np.zeros_like(a) for a in arrays] + [0.0]
    beta1, beta2, eps = 0.9, 0.999, 1e-8
    lr, lam = cfg.learning_rate, cfg.l1
    shrink = lr * lam
    tr_bufs = _Buffers(data.n_train, k, m)
    va_bufs = _Buffers(data.n_val, k, m)

    def val_mse():
        resid = _forward_into(va_bufs, w, u, v, tau, tau0, x_va, act)
        resid -= y_va
        return float(resid @ resid) / y_va.size

    best_mse = val_mse()
    best = (w.copy(), u.copy(), v.copy(), tau.copy(), tau0)

    for epoch in range(1, cfg.epochs + 1):
        loss, g_w, g_u, g_v, g_tau, g_tau0 = _smooth_loss_grads(
            w, u, v, tau, tau0, x_tr, y_tr, act, tr_bufs
        )
        if not np.isfinite(loss):
            raise TrainingDivergedError(epoch)
        c1 = 1.0 - beta1 ** epoch
        c2 = 1.0 - beta2 ** epoch
        for i, grad in enumerate([g_w, g_u, g_v, g_tau]):
            moment1[i] = beta1 * moment1[i] + (1 - beta1) * grad
            moment2[i] = beta2 * moment2[i] + (1 - beta2) * grad * grad
            arrays[i] -= lr * (moment1[i] / c1) / (np.sqrt(moment2[i] / c2) + eps)
            if shrink > 0:
                _soft_threshold(arrays[i], shrink)
        moment1[4] = beta1 * moment1[4] + (1 - beta1) * g_tau0
        moment2[4] = beta2 * moment2[4] + (1 - beta2) * g_tau0 * g_tau0
        tau0 -= lr * (moment1[4] / c1) / (np.sqrt(moment2[4] / c2) + eps)

        mse = val_mse()
        if mse < best_mse:
            best_mse = mse
            best = (w.copy(), u.copy(), v.copy(), tau.copy(), tau0)

    params = NetworkParams(*best)
    model = FittedModel(params, cfg.activation, std)
    return model, best_mse * std.y_scale**2


@dataclass
class NnlResult:
    """Best-of-``t`` restarts outcome."""

    model: "FittedModel"
    mse_va: float
    per_restart_mse: list[float]
    diverged: int = 0

    @property
    def params(self) -> NetworkParams:
        return self.model.params


def nnl(data: DataSplit, k: int, cfg: TrainConfig) -> NnlResult:
    """Train ``cfg.restarts`` networks from derived seeds, keep the best.

    The winner is the restart with the smallest validation MSE (ties go to
    the earliest restart). Diverged restarts are skipped with a warning and
    recorded as +inf; only if every restart diverges does the error
    propagate.
    """
    models, mses = [], []
    diverged = 0
    last_err = None
    for j in range(cfg.restarts):
        try:
            model, mse_va = train_once(data, k, cfg, restart_seed(cfg.seed, j))
        except TrainingDivergedError as err:
            diverged += 1
            last_err = err
            models.append(None)
            mses.append(np.inf)
            continue
        models.append(model)
        mses.append(mse_va)
    if diverged == cfg.restarts:
        raise last_err
    if diverged:
        warnings.warn(f"{diverged} of {cfg.restarts} restarts diverged at k={k}", stacklevel=2)
    best = int(np.argmin(mses))
    return NnlResult(models[best], mses[best], mses, diverged)


@dataclass
class FittedModel:
    """Trained parameters plus the transform they were trained under."""

    params: NetworkParams
    activation: str
    standardization: Standardization

    def predict(self, x) -> np.ndarray:
        """Predict responses for raw (unstandardized) inputs."""
        x = as_matrix(x, "x")
        if x.shape[1] != self.params.p:
            raise ValueError(f"input has {x.shape[1]} features, expected {self.params.p}")
        act = ACTIVATIONS[self.activation]
        pr = self.params
        out = _batch_forward(pr.w, pr.u, pr.v, pr.tau, pr.tau0, self.standardization.apply_x(x), act)
        return self.standardization.invert_y(out)

    def first_layer_original(self) -> np.ndarray:
        """First-layer weights expressed in original predictor coordinates."""
        return self.params.w / self.standardization.scales[:, None]

    def fold_standardization(self) -> NetworkParams:
        """Equivalent parameters acting directly on raw inputs/outputs.

        The feature scaling folds into the first layer, the mean shift into
        the second-layer biases (the first layer has no bias of its own), and
        the response transform into the output layer.
        """
        pr = self.params
        std = self.standardization
        w = self.first_layer_original()
        shift = pr.w.T @ (std.means / std.scales)
        v = pr.v - pr.u.T @ shift
        return NetworkParams(w, pr.u.copy(), v, std.y_scale * pr.tau,
                             std.y_scale * pr.tau0 + std.y_mean)

    def to_dict(self) -> dict:
        pr = self.params
        std = self.standardization
        return {
            "p": pr.p,
            "k": pr.k,
            "m": pr.m,
            "activation": self.activation,
            "standardization": {
                "means": std.means.tolist(),
                "scales": std.scales.tolist(),
                "y_mean": std.y_mean,
                "y_scale": std.y_scale,
            },
            "w": pr.w.tolist(),
            "u": pr.u.tolist(),
            "v": pr.v.tolist(),
            "tau": pr.tau.tolist(),
            "tau0": pr.tau0,
        }

    @classmethod
    def from_dict(cls, doc: dict) -> "FittedModel":
        std = Standardization(
            np.asarray(doc["standardization"]["means"], dtype=float),
            np.asarray(doc["standardization"]["scales"], dtype=float),
            float(doc["standardization"]["y_mean"]),
            float(doc["standardization"]["y_scale"]),
        )
        params = NetworkParams(
            np.asarray(doc["w"], dtype=float),
            np.asarray(doc["u"], dtype=float),
            np.asarray(doc["v"], dtype=float),
            np.asarray(doc["tau"], dtype=float),
            float(doc["tau0"]),
        )
        return cls(params, doc["activation"], std)

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_json(cls, text: str) -> "FittedModel":
        return cls.from_dict(json.loads(text))


def forward_cost(p: int, k: int, m: int) -> int:
    """Multiply-adds per sample for one forward pass: p*k + k*m + m."""
    return p * k + k * m + m
