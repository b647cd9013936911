"""Report writing: canonical JSON, headline CSV, and figure rendering.

Reports are deterministic: the payload is hashed over its canonical JSON
with the volatile ``meta`` block (timestamps, wall time) excluded, so two
runs with the same config and seed produce byte-identical payload sections.
"""

from __future__ import annotations

import csv
import hashlib
import json
import os
import time
from pathlib import Path

import matplotlib
matplotlib.use("Agg")
import matplotlib.pyplot as plt


def canonical_json(payload) -> str:
    return json.dumps(payload, sort_keys=True, separators=(",", ":"),
                      allow_nan=True)


def payload_hash(payload) -> str:
    return hashlib.sha256(canonical_json(payload).encode()).hexdigest()


def finalize_report(payload: dict, wall_time: float) -> dict:
    """Attach the volatile meta block outside the hashed region."""
    return {
        "payload": payload,
        "meta": {
            "hash_sha256": payload_hash(payload),
            "wall_time_s": wall_time,
            "written_at_unix": time.time(),
        },
    }


def write_report(out_dir, name: str, payload: dict, wall_time: float) -> Path:
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    path = out_dir / f"{name}.json"
    doc = finalize_report(payload, wall_time)
    # atomic publish: a concurrently running reader never sees a torn file
    tmp = path.with_suffix(".json.tmp")
    with open(tmp, "w") as fh:
        json.dump(doc, fh, indent=2, sort_keys=True)
        fh.write("\n")
    os.replace(tmp, path)
    return path


def write_headline_csv(out_dir, name: str, rows: list) -> Path:
    """Contract rows as delimited output: name, value, tolerance, passed."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    path = out_dir / f"{name}.csv"
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["check", "value", "comparator", "tolerance", "passed"])
        for row in rows:
            writer.writerow([row["check"], f"{row['value']:.6e}",
                             row.get("comparator", "<"),
                             f"{row['tolerance']:.6e}", row["passed"]])
    return path


def write_series_csv(path, xlabel: str, ylabel: str, series) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow([xlabel, ylabel])
        for x, y in series:
            writer.writerow([f"{x:.10g}", f"{y:.10g}"])
    return path


def plot_series(out_dir, name: str, series_map: dict, xlabel: str,
                ylabel: str, title: str, loglog: bool = True) -> Path:
    """Render labelled (x, y) series to a PNG next to the delimited output."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    fig, ax = plt.subplots(figsize=(5.0, 3.4))
    for label, series in series_map.items():
        xs = [x for x, _ in series]
        ys = [y for _, y in series]
        ax.plot(xs, ys, marker="o", ms=3.5, lw=1.0, label=label)
    if loglog:
        ax.set_xscale("log")
        ax.set_yscale("log")
    ax.set_xlabel(xlabel)
    ax.set_ylabel(ylabel)
    ax.set_title(title, fontsize=10)
    if series_map:
        ax.legend(fontsize=7, frameon=False)
    ax.grid(True, which="both", alpha=0.25, lw=0.4)
    fig.tight_layout()
    path = out_dir / f"{name}.png"
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path


def plot_residual_bars(out_dir, name: str, labels, values, tolerance: float,
                       title: str) -> Path:
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    fig, ax = plt.subplots(figsize=(max(4.0, 0.5 * len(labels) + 2.0), 3.4))
    xs = range(len(labels))
    ax.bar(xs, values, color="#4878a8")
    ax.axhline(tolerance, color="#b04030", lw=1.0, ls="--", label="tolerance")
    ax.set_yscale("log")
    ax.set_xticks(list(xs))
    ax.set_xticklabels(labels, rotation=45, ha="right", fontsize=7)
    ax.set_ylabel("residual")
    ax.set_title(title, fontsize=10)
    ax.legend(fontsize=7, frameon=False)
    fig.tight_layout()
    path = out_dir / f"{name}.png"
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path
