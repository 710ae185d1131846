"""Summary tables and figures for a comparison report.

Emits the numbers behind the usual strategy-comparison plots as CSV
tables: per-cell medians and interquartile ranges with significance stars
against the unarchived baseline, plus the full pairwise rank-sum matrix.
The report directory also receives box-plot figures (one per problem,
population size, and power) rendered to PNG files alongside the tables.
"""

from __future__ import annotations

import csv
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .harness import STRATEGIES, ComparisonReport

__all__ = ["summarize", "write_report"]

SUMMARY_HEADER = [
    "problem", "algorithm", "mu", "p", "strategy", "count",
    "median", "q25", "q75", "iqr", "wilcoxon_vs_none", "star",
]
WILCOXON_HEADER = [
    "problem", "algorithm", "mu", "p",
    "strategy_a", "strategy_b", "p_value", "significant",
]


def _pair_lookup(cell, a: str, b: str):
    if (a, b) in cell.pairwise_p:
        return cell.pairwise_p[(a, b)], cell.significant[(a, b)]
    if (b, a) in cell.pairwise_p:
        return cell.pairwise_p[(b, a)], cell.significant[(b, a)]
    return None, None


def summarize(report: ComparisonReport) -> tuple[list[list], list[list]]:
    """Build (summary rows, pairwise rows) without touching the filesystem."""
    if not report.cells:
        raise ValueError("empty report")
    summary: list[list] = []
    pairwise: list[list] = []
    for cell in report.cells:
        for strategy, values in cell.distributions.items():
            arr = np.asarray(values, dtype=float)
            q25, q75 = np.percentile(arr, [25, 75])
            pv, sig = (None, None) if strategy == "NONE" \
                else _pair_lookup(cell, "NONE", strategy)
            summary.append([
                cell.problem, cell.algorithm, cell.mu, cell.p, strategy,
                len(arr), float(np.median(arr)), float(q25), float(q75),
                float(q75 - q25),
                "" if pv is None else pv,
                "*" if sig else "",
            ])
        for (a, b), pv in cell.pairwise_p.items():
            pairwise.append([
                cell.problem, cell.algorithm, cell.mu, cell.p, a, b,
                pv, "*" if cell.significant[(a, b)] else "",
            ])
    return summary, pairwise


def _write_csv(rows: list[list], header: list[str], path: Path) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        writer.writerows(rows)


def _delta_figure(report: ComparisonReport, problem: str, mu: int, p: int,
                  path: Path) -> bool:
    cells = [c for c in report.cells
             if (c.problem, c.mu, c.p) == (problem, mu, p)]
    if not cells:
        return False
    fig, axes = plt.subplots(1, len(cells), squeeze=False,
                             figsize=(3.2 * len(cells), 3.4), sharey=True)
    for ax, cell in zip(axes[0], cells):
        labels = [s for s in STRATEGIES if s in cell.distributions]
        ax.boxplot([cell.distributions[s] for s in labels], tick_labels=labels)
        ax.set_title(cell.algorithm, fontsize=9)
        ax.tick_params(axis="x", labelrotation=45, labelsize=7)
    axes[0][0].set_ylabel(f"delta_{p} vs true front")
    fig.suptitle(f"{problem}, mu={mu}, p={p}")
    fig.tight_layout()
    fig.savefig(path, dpi=110)
    plt.close(fig)
    return True


def _hv_figure(report: ComparisonReport, problem: str, mu: int,
               path: Path) -> bool:
    groups: dict[str, list[float]] = {}
    for row in report.rows:
        if row.indicator == "HV" and (row.problem, row.mu) == (problem, mu):
            groups.setdefault(row.algorithm, []).append(row.value)
    if not groups:
        return False
    fig, ax = plt.subplots(figsize=(1.1 * len(groups) + 2.2, 3.4))
    ax.boxplot(list(groups.values()), tick_labels=list(groups))
    ax.set_ylabel("hypervolume of final population")
    ax.set_title(f"{problem}, mu={mu}")
    ax.tick_params(axis="x", labelrotation=30, labelsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=110)
    plt.close(fig)
    return True


def write_report(report: ComparisonReport, out_dir) -> dict[str, list[Path]]:
    """Write summary.csv, wilcoxon.csv, and box-plot figures under out_dir."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    summary, pairwise = summarize(report)
    _write_csv(summary, SUMMARY_HEADER, out_dir / "summary.csv")
    _write_csv(pairwise, WILCOXON_HEADER, out_dir / "wilcoxon.csv")

    fig_dir = out_dir / "figures"
    fig_dir.mkdir(exist_ok=True)
    figures: list[Path] = []
    seen_delta = []
    seen_hv = []
    for cell in report.cells:
        key = (cell.problem, cell.mu, cell.p)
        if key not in seen_delta:
            seen_delta.append(key)
            path = fig_dir / f"delta{cell.p}_{cell.problem}_mu{cell.mu}.png"
            if _delta_figure(report, *key, path):
                figures.append(path)
        if (cell.problem, cell.mu) not in seen_hv:
            seen_hv.append((cell.problem, cell.mu))
            path = fig_dir / f"hv_{cell.problem}_mu{cell.mu}.png"
            if _hv_figure(report, cell.problem, cell.mu, path):
                figures.append(path)
    return {
        "tables": [out_dir / "summary.csv", out_dir / "wilcoxon.csv"],
        "figures": figures,
    }
