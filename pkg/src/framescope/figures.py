"""Matplotlib renderings of analysis reports, written alongside text output."""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

from .analysis import EngagementReport, PermutationResult


def engagement_figure(report: EngagementReport, path: str | Path) -> Path:
    """Bar chart of the engagement metrics; absent ratios are skipped."""
    metrics = [
        ("highlights", float(report.highlights)),
        ("tags/highlight", report.avg_tags_per_highlight),
        ("votes/tag", report.avg_votes_per_tag),
        ("summary edits", float(report.summary_edits)),
        ("comments/tag", report.comments_per_tag),
        ("interactions/user", report.avg_interactions_per_user),
    ]
    metrics = [(name, value) for name, value in metrics if value is not None]
    names = [name for name, _ in metrics]
    values = [value for _, value in metrics]

    fig, ax = plt.subplots(figsize=(7, 4))
    bars = ax.bar(range(len(values)), values, color="#4878a8")
    ax.set_xticks(range(len(names)))
    ax.set_xticklabels(names, rotation=25, ha="right")
    ax.set_title(f"Engagement: {report.article_id}")
    ax.bar_label(bars, fmt="%.3g", padding=2, fontsize=8)
    fig.tight_layout()
    path = Path(path)
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path


def permutation_figure(result: PermutationResult, path: str | Path) -> Path:
    """Histogram of the permutation null distribution with the observed statistic."""
    fig, ax = plt.subplots(figsize=(7, 4))
    if result.null_stats is not None and len(result.null_stats):
        ax.hist(result.null_stats, bins=40, color="#9db8d2", edgecolor="white")
    ax.axvline(
        result.observed_mean_diff,
        color="#b03030",
        linewidth=2,
        label=f"observed = {result.observed_mean_diff:.4f}",
    )
    ax.set_xlabel("mean(treatment) - mean(control) under relabeling")
    ax.set_ylabel("permutations")
    ax.set_title(
        f"Permutation null ({result.mode}, N={result.n_permutations}), "
        f"p = {result.p_value:.4f}"
    )
    ax.legend()
    fig.tight_layout()
    path = Path(path)
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path
