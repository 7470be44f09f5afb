"""Chart builders: bar summary, sweep line families, and heatmap grids.

Each builder takes parsed rows and returns a matplotlib Figure; ``render``
wraps them with file output. Series values come straight from the CSV
(means and +/- 1 standard-error bands), one series per rule present.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .schema import ResultRow, SchemaError, load_rows, rules_in

KINDS = ("bar", "lines", "grid")

#: Fixed rule colors so re-renders stay visually comparable.
PALETTE = {
    "ga": "#454545",
    "ml+": "#4540cf",
    "ev+": "#a83d3d",
    "ev": "#de3028",
    "av": "#32e62c",
    "np": "#ed921a",
    "rv": "#dee046",
    "sa": "#808080",
    "ml": "#2488ed",
    "rw": "#68686b",
}
_FALLBACK_COLORS = plt.rcParams["axes.prop_cycle"].by_key()["color"]


def _color(rule: str, index: int) -> str:
    return PALETTE.get(rule, _FALLBACK_COLORS[index % len(_FALLBACK_COLORS)])


@dataclass(frozen=True)
class FigureSpec:
    csv_path: Path
    kind: str
    out_path: Path
    x_label: str | None = None
    y_label: str = "Mean relative utility"
    title: str | None = None

    def __post_init__(self) -> None:
        if self.kind not in KINDS:
            raise SchemaError(f"unknown figure kind {self.kind!r}; known: {list(KINDS)}")


def build_bar(rows: list[ResultRow], spec: FigureSpec):
    by_rule = {}
    for row in rows:
        by_rule.setdefault(row.rule, row)
    ordered = sorted(by_rule.values(), key=lambda r: r.mean, reverse=True)
    fig, ax = plt.subplots(figsize=(8, 5))
    xs = np.arange(len(ordered))
    ax.bar(
        xs,
        [r.mean for r in ordered],
        yerr=[r.std_error for r in ordered],
        color=[_color(r.rule, i) for i, r in enumerate(ordered)],
        capsize=3,
        label=None,
    )
    for i, r in enumerate(ordered):
        ax.bar(xs[i], 0, color=_color(r.rule, i), label=r.rule)
    ax.set_xticks(xs, [r.rule for r in ordered])
    ax.set_ylabel(spec.y_label)
    ax.set_ylim(0.0, 1.0)
    if spec.title:
        ax.set_title(spec.title)
    return fig


def build_lines(rows: list[ResultRow], spec: FigureSpec):
    parameters = {row.parameter for row in rows}
    if len(parameters) != 1:
        raise SchemaError(
            f"line chart needs a single swept parameter, found {sorted(parameters)}"
        )
    fig, ax = plt.subplots(figsize=(8, 5))
    for i, rule in enumerate(rules_in(rows)):
        series = sorted((r for r in rows if r.rule == rule), key=lambda r: r.value)
        xs = np.array([r.value for r in series])
        ys = np.array([r.mean for r in series])
        errs = np.array([r.std_error for r in series])
        color = _color(rule, i)
        ax.plot(xs, ys, marker="o", markersize=3, color=color, label=rule)
        ax.fill_between(xs, ys - errs, ys + errs, color=color, alpha=0.25, linewidth=0)
    ax.set_xlabel(spec.x_label or parameters.pop())
    ax.set_ylabel(spec.y_label)
    ax.legend(ncols=2, fontsize="small")
    if spec.title:
        ax.set_title(spec.title)
    return fig


def build_grid(rows: list[ResultRow], spec: FigureSpec):
    """One small heatmap per rule over (slice value, swept value) cells."""
    if any(row.slice_value is None for row in rows):
        raise SchemaError(
            "grid chart needs sweep_id slice tags like 'fig5[sigma_d=0.1]'"
        )
    rules = rules_in(rows)
    slice_vals = sorted({row.slice_value for row in rows})
    sweep_vals = sorted({row.value for row in rows})
    ncols = min(3, len(rules))
    nrows = -(-len(rules) // ncols)
    fig, axes = plt.subplots(
        nrows, ncols, figsize=(3.2 * ncols, 2.8 * nrows), squeeze=False
    )
    lo = min(row.mean for row in rows)
    hi = max(row.mean for row in rows)
    mappable = None
    for idx, rule in enumerate(rules):
        ax = axes[idx // ncols][idx % ncols]
        cells = np.full((len(slice_vals), len(sweep_vals)), np.nan)
        for row in rows:
            if row.rule == rule:
                i = slice_vals.index(row.slice_value)
                j = sweep_vals.index(row.value)
                cells[i, j] = row.mean
        mappable = ax.imshow(cells, vmin=lo, vmax=hi, origin="lower", cmap="viridis")
        ax.set_xticks(range(len(sweep_vals)), [f"{v:g}" for v in sweep_vals])
        ax.set_yticks(range(len(slice_vals)), [f"{v:g}" for v in slice_vals])
        ax.set_title(rule, fontsize="small")
    for idx in range(len(rules), nrows * ncols):
        axes[idx // ncols][idx % ncols].axis("off")
    fig.colorbar(mappable, ax=axes, shrink=0.8, label=spec.y_label)
    if spec.title:
        fig.suptitle(spec.title)
    return fig


_BUILDERS = {"bar": build_bar, "lines": build_lines, "grid": build_grid}


def render(spec: FigureSpec) -> Path:
    """Validate the CSV, build the chart, and write the image file."""
    rows = load_rows(spec.csv_path)
    fig = _BUILDERS[spec.kind](rows, spec)
    spec.out_path.parent.mkdir(parents=True, exist_ok=True)
    fig.savefig(spec.out_path, dpi=150, bbox_inches="tight")
    plt.close(fig)
    return spec.out_path
