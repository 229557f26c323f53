"""Figure rendering for the analysis reports.

Every figure mirrors one of the TSV tables written next to it: the
learning curve (chrF2++ and OOV against the training fraction), the
per-system OOV bars, and the binned per-sentence score charts where the
bar width tracks the bin population. PNG output only; uses the Agg
backend so the harness runs headless.
"""

from __future__ import annotations

import os
from typing import Mapping, Sequence

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

_LINE_STYLES = ("-", "--", ":", "-.")


def render_learning_curve(path: str, cells: Sequence) -> str:
    pipelines = sorted({c.pipeline for c in cells})
    fig, (ax_score, ax_oov) = plt.subplots(1, 2, figsize=(9, 3.5))
    for i, name in enumerate(pipelines):
        rows = sorted(
            (c for c in cells if c.pipeline == name), key=lambda c: c.fraction
        )
        fractions = [c.fraction * 100 for c in rows]
        style = _LINE_STYLES[i % len(_LINE_STYLES)]
        scores = [
            (c.chrf.scores.get("All") if c.chrf is not None else None) for c in rows
        ]
        if any(s is not None for s in scores):
            ax_score.plot(
                [f for f, s in zip(fractions, scores) if s is not None],
                [s for s in scores if s is not None],
                style,
                marker="o",
                label=name,
            )
        ax_oov.plot(
            fractions, [c.oov_pct for c in rows], style, marker="s", label=name
        )
    ax_score.set_xlabel("training data (%)")
    ax_score.set_ylabel("chrF2++")
    ax_score.set_title("MT score")
    ax_oov.set_xlabel("training data (%)")
    ax_oov.set_ylabel("OOV %")
    ax_oov.set_title("dev OOV rate")
    for ax in (ax_score, ax_oov):
        if ax.get_legend_handles_labels()[0]:
            ax.legend(fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path


def render_oov_bars(path: str, cells: Sequence) -> str:
    full = sorted(
        (c for c in cells if c.fraction == 1.0), key=lambda c: c.pipeline
    )
    if not full:
        full = sorted(cells, key=lambda c: (c.fraction, c.pipeline))
    fig, ax = plt.subplots(figsize=(5, 3.5))
    names = [c.pipeline for c in full]
    ax.bar(names, [c.oov_pct for c in full], color="0.3")
    ax.set_ylabel("OOV %")
    ax.set_title("OOV rate per pipeline (full training data)")
    ax.tick_params(axis="x", rotation=30)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path


def render_binned(path: str, feature: str, by_system: Mapping[str, Sequence]) -> str:
    """Bar chart of mean per-sentence chrF2++ per bin; bar width is
    scaled by the number of sentences in the bin."""
    fig, ax = plt.subplots(figsize=(7, 3.5))
    systems = sorted(by_system)
    n = len(systems)
    for i, name in enumerate(systems):
        all_rows = list(by_system[name])
        rows = [r for r in all_rows if r.count > 0 and r.mean_score is not None]
        if not rows:
            continue
        max_count = max(r.count for r in rows)
        centers = []
        widths = []
        finite_spans = [
            r.hi - r.lo
            for r in all_rows
            if r.lo != float("-inf") and r.hi != float("inf")
        ]
        span = min(finite_spans) if finite_spans else 1.0
        for r in rows:
            lo = r.lo if r.lo != float("-inf") else r.hi - span
            hi = r.hi if r.hi != float("inf") else r.lo + span
            centers.append((lo + hi) / 2 + (i - (n - 1) / 2) * span / (n + 1))
            widths.append(0.9 * span / n * (0.25 + 0.75 * r.count / max_count))
        ax.bar(
            centers,
            [r.mean_score for r in rows],
            width=widths,
            label=name,
            alpha=0.8,
        )
    ax.set_xlabel(feature.replace("_", " "))
    ax.set_ylabel("mean sentence chrF2++")
    if ax.get_legend_handles_labels()[0]:
        ax.legend(fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path


def render_analysis_figures(
    report_dir: str,
    curve: Sequence,
    systems: Mapping,
    binned_by_system: Mapping[str, Mapping[str, Sequence]],
) -> list[str]:
    written: list[str] = []
    if curve:
        written.append(
            render_learning_curve(os.path.join(report_dir, "learning_curve.png"), curve)
        )
        written.append(render_oov_bars(os.path.join(report_dir, "oov.png"), curve))
    features = sorted({f for per in binned_by_system.values() for f in per})
    for feature in features:
        by_system = {
            name: per[feature]
            for name, per in binned_by_system.items()
            if feature in per
        }
        if by_system:
            written.append(
                render_binned(
                    os.path.join(report_dir, f"binned_{feature}.png"),
                    feature,
                    by_system,
                )
            )
    return written
