"""Figure builders over the benchmark CSV / fit-result JSON file contracts.

These read only the public output files of the fitting package (never its
internals), build a matplotlib figure, and hand back the plotted series so
callers and tests can verify the rendering against the source data.
"""

from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

__all__ = [
    "FigureSpec",
    "read_csv_columns",
    "plot_accuracy_box",
    "plot_mse_trace",
    "plot_scaling_curve",
]

KINDS = ("accuracy_box", "mse_trace", "scaling_curve")


@dataclass
class FigureSpec:
    """What to read, how to group it, and where the image goes."""

    input: str
    out: str
    kind: str = "accuracy_box"
    group_by: str = "n"
    format: str = "png"
    title: str = ""

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"kind must be one of {KINDS}, got {self.kind!r}")
        if self.format not in ("png", "svg"):
            raise ValueError(f"format must be png or svg, got {self.format!r}")


def read_csv_columns(path) -> dict[str, list[str]]:
    """Read a CSV into per-column string lists keyed by header name."""
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise ValueError(f"{path}: empty file") from None
        columns = {name: [] for name in header}
        for row in reader:
            for name, value in zip(header, row):
                columns[name].append(value)
    return columns


def _require_columns(columns, names, path):
    missing = [n for n in names if n not in columns]
    if missing:
        raise ValueError(
            f"{path}: missing column(s) {missing}; available: {sorted(columns)}"
        )


def _grouped_metric(columns, group_by, metric):
    """Finite metric values per group label, in first-seen group order."""
    groups: dict[str, list[float]] = {}
    statuses = columns.get("status", ["ok"] * len(columns[metric]))
    for label, value, status in zip(columns[group_by], columns[metric], statuses):
        if status != "ok":
            continue
        num = float(value)
        if math.isfinite(num):
            groups.setdefault(label, []).append(num)
    return groups


def plot_accuracy_box(spec: FigureSpec):
    """Boxplot of accuracy per group, mean +- one standard deviation beside it.

    Returns ``(figure, series)`` where ``series`` maps each group label to
    ``{"values": [...], "mean": m, "sd": s}`` exactly as plotted.
    """
    columns = read_csv_columns(spec.input)
    _require_columns(columns, [spec.group_by, "r"], spec.input)
    groups = _grouped_metric(columns, spec.group_by, "r")
    if not groups or any(len(v) == 0 for v in groups.values()):
        raise ValueError(f"{spec.input}: no plottable rows for some group")

    labels = list(groups)
    data = [groups[label] for label in labels]
    fig, ax = plt.subplots(figsize=(1.8 * len(labels) + 2, 4))
    positions = np.arange(1.0, len(labels) + 1)
    ax.boxplot(data, positions=positions, widths=0.45)
    series = {}
    for pos, label in zip(positions, labels):
        values = np.asarray(groups[label])
        mean = float(values.mean())
        sd = float(values.std(ddof=1)) if values.size > 1 else 0.0
        ax.errorbar([pos + 0.32], [mean], yerr=[sd], fmt="o", color="tab:red",
                    capsize=4, markersize=4, label="mean +- sd" if pos == 1 else None)
        series[label] = {"values": values.tolist(), "mean": mean, "sd": sd}
    ax.set_xticks(positions)
    ax.set_xticklabels(labels)
    ax.set_xlabel(spec.group_by)
    ax.set_ylabel("r")
    ax.set_title(spec.title or f"accuracy by {spec.group_by}")
    ax.legend(loc="lower right")
    fig.savefig(spec.out, format=spec.format)
    plt.close(fig)
    return fig, series


def plot_mse_trace(spec: FigureSpec):
    """Validation MSE against the node counts visited by the search.

    Reads one fit-result JSON. Points are rendered sorted by node count with
    their search-visit order annotated, plus a vertical marker at the
    selected dimension. Returns ``(figure, series)`` with the plotted
    ``ks``/``mse`` arrays, the visit order, and ``d_hat``.
    """
    with open(spec.input) as fh:
        doc = json.load(fh)
    if "mse_table" not in doc or "trace" not in doc:
        raise ValueError(f"{spec.input}: not a fit result (needs mse_table and trace)")
    table = {int(k): float(v) for k, v in doc["mse_table"].items()}
    if not table:
        raise ValueError(f"{spec.input}: empty mse_table")
    d_hat = int(doc["d_hat"])
    visit_order = []
    for entry in doc["trace"].get("evaluations", []):
        if not entry["reused_from_cache"]:
            visit_order.append(int(entry["k"]))

    ks = sorted(table)
    mses = [table[k] for k in ks]
    fig, ax = plt.subplots(figsize=(6, 4))
    ax.plot(ks, mses, marker="o", color="tab:blue", label="validation MSE")
    for visit, k in enumerate(visit_order, start=1):
        ax.annotate(str(visit), (k, table[k]), textcoords="offset points",
                    xytext=(4, 6), fontsize=8, color="gray")
    ax.axvline(d_hat, color="tab:green", linestyle="--", label=f"selected k = {d_hat}")
    ax.set_xlabel("first-layer nodes k")
    ax.set_ylabel("MSE")
    ax.set_title(spec.title or "search trajectory")
    ax.legend()
    fig.savefig(spec.out, format=spec.format)
    plt.close(fig)
    return fig, {"ks": ks, "mse": mses, "visit_order": visit_order, "d_hat": d_hat}


def plot_scaling_curve(spec: FigureSpec):
    """Mean accuracy versus sample size, one line per group.

    Expects the benchmark CSV; ``group_by`` picks the line family (for a
    single family pass a constant column such as ``model``). Returns
    ``(figure, series)`` mapping group label to the (n, mean r) points.
    """
    columns = read_csv_columns(spec.input)
    _require_columns(columns, [spec.group_by, "n", "r"], spec.input)
    statuses = columns.get("status", ["ok"] * len(columns["r"]))
    points: dict[str, dict[int, list[float]]] = {}
    for label, n, value, status in zip(
        columns[spec.group_by], columns["n"], columns["r"], statuses
    ):
        if status != "ok" or not math.isfinite(float(value)):
            continue
        points.setdefault(label, {}).setdefault(int(n), []).append(float(value))
    if not points:
        raise ValueError(f"{spec.input}: no plottable rows")

    fig, ax = plt.subplots(figsize=(6, 4))
    series = {}
    for label, by_n in points.items():
        ns = sorted(by_n)
        means = [float(np.mean(by_n[n])) for n in ns]
        ax.plot(ns, means, marker="o", label=f"{spec.group_by}={label}")
        series[label] = {"n": ns, "mean_r": means}
    ax.set_xlabel("sample size n")
    ax.set_ylabel("mean r")
    ax.set_title(spec.title or "accuracy scaling")
    ax.legend()
    fig.savefig(spec.out, format=spec.format)
    plt.close(fig)
    return fig, series
