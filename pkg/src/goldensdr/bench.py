"""Replicated benchmark harness over the synthetic models.

A benchmark config lists experiment cells (model, sizes, noise,
replications); every replication draws its own seed from the base seed via
documented arithmetic, so the emitted CSV is a pure function of
(config, base_seed) no matter how many workers run it.
"""

from __future__ import annotations

import csv
import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace

from .dimsearch import PenaltyConfig, run_sdr
from .metrics import SubspacePair, aggregate, mse, vector_correlation
from .network import TrainConfig, split_train_val
from .rng import cell_seed, replication_seed
from .simgen import GeneratedData, ModelSpec, generate

__all__ = ["BenchCell", "BenchConfig", "BenchRow", "run_bench", "write_rows_csv", "summarize"]

CSV_HEADER = [
    "model", "n", "p", "noise", "rep", "d_hat", "r",
    "mse_train", "mse_val", "mse_test", "nnl_calls", "wall_seconds", "seed", "status",
]


@dataclass(frozen=True)
class BenchCell:
    """One experiment: a model at a given size/noise, replicated."""

    model_id: int
    n_train_val: int
    p: int = 20
    noise: float | None = None
    val_frac: float = 0.2
    n_test: int = 1000
    replications: int = 10

    def __post_init__(self):
        if self.replications < 1:
            raise ValueError("replications must be >= 1")
        if not 0.0 < self.val_frac < 1.0:
            raise ValueError("val_frac must be in (0, 1)")


@dataclass(frozen=True)
class BenchConfig:
    cells: tuple[BenchCell, ...]
    train: TrainConfig = TrainConfig()
    penalty: PenaltyConfig = PenaltyConfig()
    base_seed: int = 0
    parallelism: int = 1

    @classmethod
    def from_dict(cls, doc: dict) -> "BenchConfig":
        cells = tuple(BenchCell(**cell) for cell in doc["cells"])
        train = TrainConfig(**doc.get("train", {}))
        penalty = PenaltyConfig(**doc.get("penalty", {}))
        return cls(cells, train, penalty,
                   int(doc.get("base_seed", 0)), int(doc.get("parallelism", 1)))


@dataclass
class BenchRow:
    model: int
    n: int
    p: int
    noise: float
    rep: int
    d_hat: int | None
    r: float
    mse_train: float
    mse_val: float
    mse_test: float
    nnl_calls: int | None
    wall_seconds: float
    seed: int
    status: str = "ok"

    def as_record(self) -> list[str]:
        def num(x):
            if x is None:
                return "nan"
            if isinstance(x, int):
                return str(x)
            return f"{x:.17g}"

        return [
            str(self.model), str(self.n), str(self.p), num(self.noise), str(self.rep),
            num(self.d_hat), num(self.r), num(self.mse_train), num(self.mse_val),
            num(self.mse_test), num(self.nnl_calls), f"{self.wall_seconds:.6f}",
            str(self.seed), self.status,
        ]


def _replicate(cell: BenchCell, train: TrainConfig, penalty: PenaltyConfig,
               seed: int, rep: int) -> BenchRow:
    spec = ModelSpec(cell.model_id, cell.n_train_val + cell.n_test,
                     p=cell.p, noise=cell.noise, seed=seed)
    start = time.perf_counter()
    try:
        data: GeneratedData = generate(spec)
        cut = cell.n_train_val
        split = split_train_val(
            data.x[:cut], data.y[:cut], val_frac=cell.val_frac, seed=seed,
            x_test=data.x[cut:], y_test=data.y[cut:],
        )
        outcome = run_sdr(split, replace(train, seed=seed), penalty)
        r = vector_correlation(SubspacePair(data.beta_true, outcome.beta_hat))
        row = BenchRow(
            model=cell.model_id,
            n=cell.n_train_val,
            p=cell.p,
            noise=spec.effective_noise,
            rep=rep,
            d_hat=outcome.d_hat,
            r=r,
            mse_train=mse(outcome.model.predict(split.x_train), split.y_train),
            mse_val=outcome.mse_table[outcome.d_hat],
            mse_test=mse(outcome.model.predict(data.x[cut:]), data.y[cut:]),
            nnl_calls=outcome.trace.nnl_invocations,
            wall_seconds=time.perf_counter() - start,
            seed=seed,
        )
    except Exception as err:  # failed cells become rows, the run continues
        row = BenchRow(
            model=cell.model_id, n=cell.n_train_val, p=cell.p,
            noise=cell.noise if cell.noise is not None else math.nan,
            rep=rep, d_hat=None, r=math.nan, mse_train=math.nan,
            mse_val=math.nan, mse_test=math.nan, nnl_calls=None,
            wall_seconds=time.perf_counter() - start, seed=seed,
            status=type(err).__name__,
        )
    return row


def _task(args) -> tuple[int, int, BenchRow]:
    cell_index, rep, cell, train, penalty, seed = args
    return cell_index, rep, _replicate(cell, train, penalty, seed, rep)


def run_bench(config: BenchConfig) -> list[BenchRow]:
    """Run every cell x replication; rows come back sorted by (cell, rep)."""
    tasks = []
    for ci, cell in enumerate(config.cells):
        base = cell_seed(config.base_seed, ci)
        for rep in range(cell.replications):
            tasks.append((ci, rep, cell, config.train, config.penalty,
                          replication_seed(base, rep)))
    if config.parallelism > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=config.parallelism) as pool:
            results = list(pool.map(_task, tasks))
    else:
        results = [_task(t) for t in tasks]
    results.sort(key=lambda item: (item[0], item[1]))
    return [row for _, _, row in results]


def write_rows_csv(path, rows: list[BenchRow]):
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(CSV_HEADER)
        for row in rows:
            writer.writerow(row.as_record())


def summarize(rows: list[BenchRow]) -> str:
    """Per-cell mean +- standard error of r and test MSE."""
    groups: dict[tuple, list[BenchRow]] = {}
    for row in rows:
        groups.setdefault((row.model, row.n, row.p, row.noise), []).append(row)
    lines = []
    for (model, n, p, noise), members in groups.items():
        ok = [m for m in members if m.status == "ok"]
        label = f"model={model} n={n} p={p} noise={noise:g}"
        if len(ok) >= 2:
            r_mean, r_se = aggregate([m.r for m in ok])
            t_mean, t_se = aggregate([m.mse_test for m in ok])
            lines.append(
                f"{label}  reps={len(ok)}/{len(members)}  "
                f"r={r_mean:.4f}+-{r_se:.4f}  mse_test={t_mean:.4f}+-{t_se:.4f}"
            )
        elif ok:
            lines.append(
                f"{label}  reps=1/{len(members)}  r={ok[0].r:.4f}  "
                f"mse_test={ok[0].mse_test:.4f}"
            )
        else:
            lines.append(f"{label}  all {len(members)} replications failed")
    return "\n".join(lines)
