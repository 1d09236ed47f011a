"""Render success-curve and strategy-comparison figures from aggregate CSV.

The figure layer never recomputes statistics: every plotted point or bar is a
mean (or std) cell taken verbatim from the CSV. Rendering is deterministic:
fixed Agg backend, fixed svg hash salt, no date metadata, so the same CSV
always produces identical image bytes.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
matplotlib.rcParams["svg.hashsalt"] = "figgen"

import matplotlib.pyplot as plt
import pandas as pd

KINDS = ("learning-curves-by-algorithm", "learning-curves-by-f", "strategy-comparison")

REQUIRED_COLUMNS = ("algorithm", "f", "strategy", "checkpoint", "mean", "std")

# canonical display order; anything unknown goes after, alphabetically
ALGORITHM_ORDER = ("knn", "pe", "ap", "cwp")
STRATEGY_ORDER = ("discriminative", "descriptive")


class MissingConditionError(ValueError):
    """Requested condition has no rows; the message lists what exists."""

    def __init__(self, requested: str, frame: pd.DataFrame):
        keys = sorted(
            set(zip(frame["algorithm"], frame["f"], frame["strategy"]))
        )
        available = ", ".join(f"({a}, f={f:g}, {s})" for a, f, s in keys)
        super().__init__(f"no rows match {requested}; available conditions: {available}")


@dataclass(frozen=True)
class FigureSpec:
    kind: str
    csv: Path
    out: Path  # base path; .png and .svg are written next to it
    f: float | None = None
    algorithm: str | None = None
    strategy: str | None = None
    checkpoint: int | None = None  # strategy-comparison column (default: last common)
    logx: bool = False
    title: str | None = None

    def __post_init__(self) -> None:
        if self.kind not in KINDS:
            raise ValueError(f"kind must be one of {KINDS} (got {self.kind!r})")


def load_aggregate(path: str | Path) -> pd.DataFrame:
    frame = pd.read_csv(path)
    missing = [c for c in REQUIRED_COLUMNS if c not in frame.columns]
    if missing:
        raise ValueError(f"{path}: aggregate CSV lacks columns {missing}")
    return frame


def _ordered(values, preferred) -> list:
    values = list(dict.fromkeys(values))
    known = [v for v in preferred if v in values]
    return known + sorted(v for v in values if v not in preferred)


def _curve_axes(ax, spec: FigureSpec) -> None:
    ax.set_xlabel("training interactions")
    ax.set_ylabel("communicative success")
    ax.set_ylim(0.0, 1.05)
    if spec.logx:
        ax.set_xscale("symlog", linthresh=1)
    ax.grid(True, alpha=0.3)


def _curves_by_algorithm(ax, spec: FigureSpec, frame: pd.DataFrame) -> None:
    if spec.f is None:
        raise ValueError("learning-curves-by-algorithm requires an f filter")
    strategy = spec.strategy or "discriminative"
    rows = frame[(frame["f"] == spec.f) & (frame["strategy"] == strategy)]
    if rows.empty:
        raise MissingConditionError(f"f={spec.f:g}, strategy={strategy}", frame)
    for algorithm in _ordered(rows["algorithm"], ALGORITHM_ORDER):
        sub = rows[rows["algorithm"] == algorithm].sort_values("checkpoint")
        ax.errorbar(
            sub["checkpoint"], sub["mean"], yerr=sub["std"],
            marker="o", markersize=3, capsize=2, label=algorithm,
        )
    ax.legend(title="algorithm")
    ax.set_title(spec.title or f"communicative success, f={spec.f:g} ({strategy})")


def _curves_by_f(ax, spec: FigureSpec, frame: pd.DataFrame) -> None:
    if spec.algorithm is None:
        raise ValueError("learning-curves-by-f requires an algorithm filter")
    strategy = spec.strategy or "discriminative"
    rows = frame[(frame["algorithm"] == spec.algorithm) & (frame["strategy"] == strategy)]
    if rows.empty:
        raise MissingConditionError(f"algorithm={spec.algorithm}, strategy={strategy}", frame)
    for f_value in sorted(rows["f"].unique()):
        sub = rows[rows["f"] == f_value].sort_values("checkpoint")
        ax.errorbar(
            sub["checkpoint"], sub["mean"], yerr=sub["std"],
            marker="o", markersize=3, capsize=2, label=f"f={f_value:g}",
        )
    ax.legend(title="pointing probability")
    ax.set_title(spec.title or f"communicative success, {spec.algorithm} ({strategy})")


def _strategy_comparison(ax, spec: FigureSpec, frame: pd.DataFrame) -> None:
    if spec.f is None:
        raise ValueError("strategy-comparison requires an f filter")
    rows = frame[frame["f"] == spec.f]
    if spec.algorithm is not None:
        rows = rows[rows["algorithm"] == spec.algorithm]
    if rows.empty:
        raise MissingConditionError(f"f={spec.f:g}", frame)
    if spec.checkpoint is None:
        # last checkpoint present in every (algorithm, strategy) cell
        common = None
        for _, sub in rows.groupby(["algorithm", "strategy"]):
            marks = set(sub["checkpoint"])
            common = marks if common is None else common & marks
        if not common:
            raise ValueError("no checkpoint is shared by all conditions")
        checkpoint = max(common)
    else:
        checkpoint = spec.checkpoint
    rows = rows[rows["checkpoint"] == checkpoint]
    if rows.empty:
        raise MissingConditionError(f"f={spec.f:g}, checkpoint={checkpoint}", frame)

    algorithms = _ordered(rows["algorithm"], ALGORITHM_ORDER)
    strategies = _ordered(rows["strategy"], STRATEGY_ORDER)
    width = 0.8 / len(strategies)
    for si, strategy in enumerate(strategies):
        heights, errors, positions = [], [], []
        for ai, algorithm in enumerate(algorithms):
            cell = rows[(rows["algorithm"] == algorithm) & (rows["strategy"] == strategy)]
            if cell.empty:
                raise MissingConditionError(
                    f"algorithm={algorithm}, f={spec.f:g}, strategy={strategy}, "
                    f"checkpoint={checkpoint}",
                    frame,
                )
            heights.append(float(cell["mean"].iloc[0]))
            errors.append(float(cell["std"].iloc[0]))
            positions.append(ai + (si - (len(strategies) - 1) / 2) * width)
        ax.bar(positions, heights, width=width, yerr=errors, capsize=3, label=strategy)
    ax.set_xticks(range(len(algorithms)))
    ax.set_xticklabels(algorithms)
    ax.set_ylabel("communicative success")
    ax.set_ylim(0.0, 1.05)
    ax.legend(title="production strategy")
    ax.set_title(
        spec.title
        or f"production strategy effect, f={spec.f:g}, {checkpoint} training interactions"
    )


def build_figure(spec: FigureSpec, frame: pd.DataFrame):
    """Build the matplotlib figure for a spec from loaded aggregate rows."""
    fig, ax = plt.subplots(figsize=(6.0, 4.0), dpi=150)
    try:
        if spec.kind == "learning-curves-by-algorithm":
            _curves_by_algorithm(ax, spec, frame)
        elif spec.kind == "learning-curves-by-f":
            _curves_by_f(ax, spec, frame)
        else:
            _strategy_comparison(ax, spec, frame)
    except Exception:
        plt.close(fig)
        raise
    if spec.kind != "strategy-comparison":
        _curve_axes(ax, spec)
    fig.tight_layout()
    return fig


def render(spec: FigureSpec) -> list[Path]:
    """Render a spec to <out>.png and <out>.svg; returns the written paths."""
    frame = load_aggregate(spec.csv)
    fig = build_figure(spec, frame)
    base = Path(spec.out)
    base.parent.mkdir(parents=True, exist_ok=True)
    if base.suffix in (".png", ".svg"):
        base = base.with_suffix("")
    written = []
    try:
        for suffix, metadata in ((".png", None), (".svg", {"Date": None})):
            target = base.with_suffix(suffix)
            fig.savefig(target, metadata=metadata)
            written.append(target)
    finally:
        plt.close(fig)
    return written
