"""Report rendering: delimited tables plus chart figures next to them.

Given an output stem, each writer produces ``<stem>.csv`` and ``<stem>.png``
so ranking and audit results can be read by both scripts and humans.
"""

from __future__ import annotations

import csv
import os

import matplotlib

matplotlib.use("Agg")  # headless: render straight to files
import matplotlib.pyplot as plt

from .goal import PARAMETERS


def _ensure_dir(stem: str) -> None:
    parent = os.path.dirname(os.path.abspath(stem))
    os.makedirs(parent, exist_ok=True)


def write_ranking_report(scored, stem: str) -> tuple[str, str]:
    """``scored``: list of (model-id, GoalFitness), best first."""
    _ensure_dir(stem)
    csv_path, png_path = stem + ".csv", stem + ".png"

    with open(csv_path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["rank", "model", "total", *PARAMETERS])
        for i, (mid, fit) in enumerate(scored, start=1):
            writer.writerow(
                [i, mid, f"{float(fit.total):.6f}"]
                + [f"{float(fit.per_parameter[p]):.6f}" for p in PARAMETERS]
            )

    labels = [mid for mid, _ in scored]
    totals = [float(fit.total) for _, fit in scored]
    fig, ax = plt.subplots(figsize=(max(4, 1.2 * len(labels)), 3.5))
    ax.bar(labels, totals, color="#4878a8")
    ax.set_ylim(0, 1)
    ax.set_ylabel("goal fitness")
    ax.set_title("Reference model ranking")
    for i, total in enumerate(totals):
        ax.text(i, total + 0.02, f"{total:.2f}", ha="center", fontsize=8)
    fig.tight_layout()
    fig.savefig(png_path, dpi=120)
    plt.close(fig)
    return csv_path, png_path


def write_audit_report(result, stem: str) -> tuple[str, str]:
    """``result``: an AuditResult."""
    _ensure_dir(stem)
    csv_path, png_path = stem + ".csv", stem + ".png"

    rows = [
        ("completeness", result.completeness),
        ("correctness", result.correctness),
    ]
    if result.efficiency is not None:
        rows.append(("efficiency", result.efficiency))

    with open(csv_path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["metric", "exact", "decimal"])
        for name, value in rows:
            writer.writerow([name, str(value), f"{float(value):.6f}"])
        writer.writerow([])
        writer.writerow(["category", "count"])
        writer.writerow(["matched", len(result.matched)])
        writer.writerow(["correct", len(result.correct)])
        writer.writerow(["missed", len(result.missed)])
        writer.writerow(["extra", len(result.extra)])

    names = [name for name, _ in rows]
    values = [float(v) for _, v in rows]
    fig, ax = plt.subplots(figsize=(4.5, 3.5))
    ax.bar(names, values, color=["#4878a8", "#6aa66a", "#c78b4e"][: len(names)])
    ax.set_ylim(0, max(1.0, max(values) * 1.15))
    ax.set_title("Adaptation audit")
    for i, value in enumerate(values):
        ax.text(i, value + 0.02, f"{value:.2f}", ha="center", fontsize=8)
    fig.tight_layout()
    fig.savefig(png_path, dpi=120)
    plt.close(fig)
    return csv_path, png_path
