"""Render a sweep result file: CSV export plus summary figures.

Reads the JSONL stream written by the sweep, writes a delimited export next
to a handful of PNG figures (case mix, speciality histogram, per-(d, r)
agreement grid) and a small summary manifest.
"""

from __future__ import annotations

import csv
import json
from collections import Counter
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .systems import format_multiplicities

CSV_FIELDS = [
    "d",
    "m",
    "r",
    "formula_dim",
    "oracle_dim",
    "match",
    "stable",
    "vdim",
    "edim",
    "speciality",
    "case_path",
    "error",
]


def load_records(jsonl_path) -> list[dict]:
    records = []
    with open(jsonl_path, encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if line:
                records.append(json.loads(line))
    return records


def write_csv(records: list[dict], path) -> Path:
    path = Path(path)
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.DictWriter(fh, fieldnames=CSV_FIELDS)
        writer.writeheader()
        for rec in records:
            writer.writerow(
                {
                    "d": rec["d"],
                    "m": format_multiplicities(rec["m"]),
                    "r": len(rec["m"]),
                    "formula_dim": rec["formula_dim"],
                    "oracle_dim": rec["oracle_dim"],
                    "match": rec["match"],
                    "stable": rec["stable"],
                    "vdim": rec["vdim"],
                    "edim": rec["edim"],
                    "speciality": rec["speciality"],
                    "case_path": "->".join(rec["case_path"]),
                    "error": rec["error"] or "",
                }
            )
    return path


def _fig_case_mix(records, path) -> Path:
    counts = Counter("->".join(rec["case_path"]) or "(error)" for rec in records)
    labels, values = zip(*sorted(counts.items(), key=lambda kv: -kv[1]))
    fig, ax = plt.subplots(figsize=(7, 4))
    ax.bar(range(len(labels)), values, color="#4878a8")
    ax.set_xticks(range(len(labels)))
    ax.set_xticklabels(labels, rotation=30, ha="right", fontsize=8)
    ax.set_ylabel("instances")
    ax.set_title("classification mix across the sweep")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return Path(path)


def _fig_speciality(records, path) -> Path:
    values = [rec["speciality"] for rec in records if rec["speciality"] is not None]
    fig, ax = plt.subplots(figsize=(6, 4))
    if values:
        lo, hi = min(values), max(values)
        bins = np.arange(lo - 0.5, hi + 1.5)
        ax.hist(values, bins=bins, color="#a85448", rwidth=0.9)
    ax.set_xlabel("speciality (dim - edim)")
    ax.set_ylabel("instances")
    ax.set_title("speciality distribution")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return Path(path)


def _fig_agreement(records, path) -> Path:
    d_max = max((rec["d"] for rec in records), default=0)
    r_max = max((len(rec["m"]) for rec in records), default=0)
    total = np.zeros((d_max + 1, r_max + 1))
    bad = np.zeros_like(total)
    for rec in records:
        d, r = rec["d"], len(rec["m"])
        total[d, r] += 1
        if not rec["match"]:
            bad[d, r] += 1
    with np.errstate(invalid="ignore", divide="ignore"):
        frac = np.where(total > 0, 1.0 - bad / np.maximum(total, 1), np.nan)
    fig, ax = plt.subplots(figsize=(7, 4.5))
    im = ax.imshow(frac, origin="lower", vmin=0.0, vmax=1.0, cmap="RdYlGn", aspect="auto")
    ax.set_xlabel("number of points r")
    ax.set_ylabel("degree d")
    ax.set_title("formula-vs-oracle agreement by (d, r)")
    fig.colorbar(im, ax=ax, label="match fraction")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return Path(path)


def build_report(jsonl_path, outdir) -> dict:
    """Write records.csv, the figures and summary.json under outdir."""
    outdir = Path(outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    records = load_records(jsonl_path)
    if not records:
        raise ValueError(f"no records in {jsonl_path}")

    outputs = {
        "csv": str(write_csv(records, outdir / "records.csv")),
        "figures": [
            str(_fig_case_mix(records, outdir / "case_mix.png")),
            str(_fig_speciality(records, outdir / "speciality_hist.png")),
            str(_fig_agreement(records, outdir / "agreement_grid.png")),
        ],
    }
    summary = {
        "total": len(records),
        "matches": sum(1 for r in records if r["match"]),
        "mismatches": sum(1 for r in records if not r["match"] and r["error"] is None),
        "unstable": sum(1 for r in records if r["error"] is None and not r["stable"]),
        "errors": sum(1 for r in records if r["error"] is not None),
        "outputs": outputs,
    }
    with open(outdir / "summary.json", "w", encoding="utf-8") as fh:
        json.dump(summary, fh, indent=2, sort_keys=True)
    return summary
