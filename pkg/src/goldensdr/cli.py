"""Command-line interface: simulate, fit, eval, bench.

Exit codes: 0 success, 1 usage error, 2 data error, 3 numerical failure.
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from .bench import BenchConfig, run_bench, summarize, write_rows_csv
from .dimsearch import PenaltyConfig, SdrOutcome, run_sdr
from .linalg import RankDeficientError
from .metrics import SubspacePair, vector_correlation
from .network import TrainConfig, TrainingDivergedError, split_train_val
from .simgen import (
    ModelSpec,
    generate,
    read_basis_csv,
    read_dataset_csv,
    write_basis_csv,
    write_dataset_csv,
)

__all__ = ["main"]


class UsageError(Exception):
    pass


class DataError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _build_parser() -> _Parser:
    parser = _Parser(prog="goldensdr",
                     description="Neural-network sufficient dimension reduction")
    sub = parser.add_subparsers(dest="command", required=True)

    sim = sub.add_parser("simulate", parents=[], help="write a synthetic dataset",
                         description="Simulate one of the benchmark models to CSV.")
    sim.add_argument("--model", type=int, required=True, help="model id, 1..7")
    sim.add_argument("--n", type=int, required=True, help="number of samples")
    sim.add_argument("--p", type=int, default=None,
                     help="ambient dimension (default 20; model 3 is fixed at 10)")
    sim.add_argument("--noise", type=float, default=None,
                     help="noise multiplier (default: the model's own)")
    sim.add_argument("--seed", type=int, default=0)
    sim.add_argument("--out", required=True, help="output prefix for _data.csv/_beta.csv")
    sim.set_defaults(func=cmd_simulate)

    fit = sub.add_parser("fit", help="estimate dimension and basis from a CSV",
                         description="Run the SDR search on a dataset CSV.")
    fit.add_argument("data", help="dataset CSV with header x1,...,xp,y")
    fit.add_argument("--out", default=None, help="result JSON path (default: <data>.result.json)")
    fit.add_argument("--val-frac", type=float, default=0.2)
    fit.add_argument("--m", type=int, default=20, help="second-layer width")
    fit.add_argument("--restarts", type=int, default=3)
    fit.add_argument("--lambda", dest="l1", type=float, default=1e-3, help="L1 strength")
    fit.add_argument("--lr", type=float, default=0.01)
    fit.add_argument("--epochs", type=int, default=2000)
    fit.add_argument("--activation", choices=["tanh", "logistic"], default="tanh")
    fit.add_argument("--no-standardize", action="store_true")
    fit.add_argument("--pen-scale", type=float, default=0.07)
    fit.add_argument("--pen-override", type=float, default=None)
    fit.add_argument("--paper-literal-offset", action="store_true")
    fit.add_argument("--seed", type=int, default=0)
    fit.set_defaults(func=cmd_fit)

    ev = sub.add_parser("eval", help="score a fit result against a truth basis",
                        description="Vector correlation between result and truth.")
    ev.add_argument("--result", required=True, help="result JSON from fit")
    ev.add_argument("--truth", required=True, help="truth basis CSV")
    ev.set_defaults(func=cmd_eval)

    be = sub.add_parser("bench", help="run a replicated benchmark",
                        description="Run every cell x replication of a config file.")
    be.add_argument("--config", required=True, help="benchmark config JSON")
    be.add_argument("--out", required=True, help="results CSV path")
    be.add_argument("--parallelism", type=int, default=None,
                    help="override the config's worker count")
    be.set_defaults(func=cmd_bench)
    return parser


def cmd_simulate(args) -> int:
    p = args.p if args.p is not None else (10 if args.model == 3 else 20)
    try:
        spec = ModelSpec(args.model, args.n, p=p, noise=args.noise, seed=args.seed)
    except ValueError as err:
        raise UsageError(str(err)) from err
    data = generate(spec)
    data_path = f"{args.out}_data.csv"
    beta_path = f"{args.out}_beta.csv"
    write_dataset_csv(data_path, data.x, data.y)
    write_basis_csv(beta_path, data.beta_true)
    print(data_path)
    print(beta_path)
    print(f"d_true={data.d_true}")
    return 0


def fit_dataset(x, y, *, val_frac=0.2, train: TrainConfig = TrainConfig(),
                penalty: PenaltyConfig = PenaltyConfig(), seed=0,
                paper_literal_offset=False) -> SdrOutcome:
    """Library twin of the fit command: split, search, return the outcome."""
    split = split_train_val(x, y, val_frac=val_frac, seed=seed)
    return run_sdr(split, train, penalty, paper_literal_offset=paper_literal_offset)


def cmd_fit(args) -> int:
    try:
        x, y = read_dataset_csv(args.data)
    except (OSError, ValueError) as err:
        raise DataError(str(err)) from err
    train = TrainConfig(m=args.m, restarts=args.restarts, l1=args.l1,
                        learning_rate=args.lr, epochs=args.epochs,
                        activation=args.activation,
                        standardize=not args.no_standardize, seed=args.seed)
    penalty = PenaltyConfig(scale=args.pen_scale, override=args.pen_override)
    outcome = fit_dataset(x, y, val_frac=args.val_frac, train=train,
                          penalty=penalty, seed=args.seed,
                          paper_literal_offset=args.paper_literal_offset)
    out_path = args.out if args.out is not None else f"{args.data}.result.json"
    with open(out_path, "w") as fh:
        fh.write(outcome.to_json(indent=2))
    print(f"d_hat={outcome.d_hat}")
    print("k mse_va")
    for k in sorted(outcome.mse_table):
        print(f"{k} {outcome.mse_table[k]:.17g}")
    print(out_path)
    return 0


def cmd_eval(args) -> int:
    try:
        with open(args.result) as fh:
            doc = json.load(fh)
        beta_hat = SdrOutcome.beta_from_dict(doc)
        truth = read_basis_csv(args.truth)
    except (OSError, ValueError, KeyError, TypeError) as err:
        raise DataError(str(err)) from err
    try:
        r = vector_correlation(SubspacePair(truth, beta_hat))
    except RankDeficientError as err:
        raise DataError(f"truth basis is rank deficient: {err}") from err
    print(f"{r:.4f}")
    return 0


def cmd_bench(args) -> int:
    try:
        with open(args.config) as fh:
            doc = json.load(fh)
        config = BenchConfig.from_dict(doc)
    except (OSError, ValueError, KeyError, TypeError) as err:
        raise DataError(str(err)) from err
    if args.parallelism is not None:
        config = BenchConfig(config.cells, config.train, config.penalty,
                             config.base_seed, args.parallelism)
    rows = run_bench(config)
    write_rows_csv(args.out, rows)
    print(summarize(rows))
    print(args.out)
    return 0


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as err:
        print(f"goldensdr: error: {err}", file=sys.stderr)
        return 1
    except DataError as err:
        print(f"goldensdr: data error: {err}", file=sys.stderr)
        return 2
    except (TrainingDivergedError, RankDeficientError, np.linalg.LinAlgError) as err:
        print(f"goldensdr: numerical failure: {err}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
