import csv

import pytest

from goldensdr.bench import (
    BenchCell,
    BenchConfig,
    CSV_HEADER,
    run_bench,
    summarize,
    write_rows_csv,
)
from goldensdr.dimsearch import PenaltyConfig, call_budget
from goldensdr.network import TrainConfig

FAST_TRAIN = TrainConfig(epochs=120, restarts=1)


def tiny_config(parallelism=1, replications=3):
    cells = (BenchCell(model_id=4, n_train_val=200, p=6, n_test=50,
                       replications=replications),)
    return BenchConfig(cells, FAST_TRAIN, PenaltyConfig(), base_seed=11,
                       parallelism=parallelism)


def strip_wall(path):
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    wall = rows[0].index("wall_seconds")
    return [[v for i, v in enumerate(row) if i != wall] for row in rows]


class TestRunBench:
    def test_row_shape_and_header(self, tmp_path):
        rows = run_bench(tiny_config())
        assert len(rows) == 3
        path = tmp_path / "out.csv"
        write_rows_csv(path, rows)
        parsed = list(csv.reader(open(path)))
        assert parsed[0] == CSV_HEADER
        assert len(parsed) == 4

    def test_rows_have_valid_metrics(self):
        for row in run_bench(tiny_config()):
            assert row.status == "ok"
            assert 0.0 <= row.r <= 1.0
            assert 1 <= row.d_hat <= 6
            assert row.mse_test > 0
            assert row.nnl_calls <= call_budget(6) + 6

    def test_serial_equals_parallel(self, tmp_path):
        serial = tmp_path / "serial.csv"
        parallel = tmp_path / "parallel.csv"
        write_rows_csv(serial, run_bench(tiny_config(parallelism=1)))
        write_rows_csv(parallel, run_bench(tiny_config(parallelism=2)))
        assert strip_wall(serial) == strip_wall(parallel)

    def test_distinct_seeds_per_replication(self):
        rows = run_bench(tiny_config())
        seeds = [row.seed for row in rows]
        assert len(set(seeds)) == len(seeds)

    def test_failure_becomes_status_row(self):
        # n_test=0 rows make the test MSE computation fail, not the run
        cells = (BenchCell(model_id=4, n_train_val=150, p=6, n_test=0,
                           replications=2),)
        config = BenchConfig(cells, FAST_TRAIN, base_seed=1)
        rows = run_bench(config)
        assert len(rows) == 2
        assert all(row.status != "" for row in rows)

    def test_summary_mentions_each_cell(self):
        rows = run_bench(tiny_config())
        text = summarize(rows)
        assert "model=4" in text and "r=" in text and "+-" in text


class TestBenchConfig:
    def test_from_dict_defaults(self):
        config = BenchConfig.from_dict(
            {"cells": [{"model_id": 1, "n_train_val": 100}], "base_seed": 5}
        )
        assert config.cells[0].replications == 10
        assert config.cells[0].val_frac == 0.2
        assert config.base_seed == 5

    def test_bad_val_frac_rejected(self):
        with pytest.raises(ValueError):
            BenchCell(model_id=1, n_train_val=100, val_frac=1.5)

    def test_train_overrides_flow_through(self):
        config = BenchConfig.from_dict(
            {"cells": [{"model_id": 1, "n_train_val": 100}],
             "train": {"epochs": 9, "m": 4}}
        )
        assert config.train.epochs == 9
        assert config.train.m == 4
