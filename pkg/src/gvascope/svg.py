"""Hand-written SVG charts: scree spectrum, share spectrum, irregularity."""

from __future__ import annotations

import math
from typing import Optional, Sequence
from xml.sax.saxutils import escape, quoteattr

from .baseline import RegressionModel, ScreeOrdering, predict

WIDTH = 800
HEIGHT = 500
LEFT, RIGHT, TOP, BOTTOM = 90, 30, 50, 70
PLOT_W = WIDTH - LEFT - RIGHT
PLOT_H = HEIGHT - TOP - BOTTOM

DATA_COLOR = "#1f77b4"
BASELINE_COLOR = "#444444"
FLAG_COLOR = "#d62728"
THRESHOLD_COLOR = "#ff7f0e"


def _f(v: float) -> str:
    return f"{v:.2f}"


class _Axes:
    def __init__(self, x_lo, x_hi, y_lo, y_hi):
        if x_hi <= x_lo:
            x_lo, x_hi = x_lo - 0.5, x_lo + 0.5
        if y_hi <= y_lo:
            y_lo, y_hi = y_lo - 0.5, y_lo + 0.5
        self.x_lo, self.x_hi, self.y_lo, self.y_hi = x_lo, x_hi, y_lo, y_hi

    def px(self, x):
        return LEFT + (x - self.x_lo) / (self.x_hi - self.x_lo) * PLOT_W

    def py(self, y):
        return TOP + PLOT_H - (y - self.y_lo) / (self.y_hi - self.y_lo) * PLOT_H


def _ticks(lo: float, hi: float, count: int = 5) -> list:
    return [lo + (hi - lo) * i / count for i in range(count + 1)]


def _open(title: str) -> list:
    return [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{WIDTH}" height="{HEIGHT}" '
        f'viewBox="0 0 {WIDTH} {HEIGHT}">',
        f'<rect class="background" x="0" y="0" width="{WIDTH}" height="{HEIGHT}" fill="#ffffff"/>',
        f'<text class="title" x="{WIDTH / 2:.1f}" y="30" text-anchor="middle" font-family="sans-serif" '
        f'font-size="18">{escape(title)}</text>',
    ]


def _frame(lines: list, ax: _Axes, x_label: str, y_label: str, y_ticks, y_fmt, x_ticks, x_fmt=str):
    bottom = TOP + PLOT_H
    for v in y_ticks:
        y = ax.py(v)
        lines.append(
            f'<line class="grid" x1="{LEFT}" y1="{_f(y)}" x2="{LEFT + PLOT_W}" y2="{_f(y)}" stroke="#e0e0e0"/>'
        )
        lines.append(
            f'<text class="tick" x="{LEFT - 8}" y="{_f(y + 4)}" text-anchor="end" font-family="sans-serif" '
            f'font-size="11">{escape(y_fmt(v))}</text>'
        )
    for v in x_ticks:
        x = ax.px(v)
        lines.append(f'<line class="tick-mark" x1="{_f(x)}" y1="{bottom}" x2="{_f(x)}" y2="{bottom + 5}" stroke="#000000"/>')
        lines.append(
            f'<text class="tick" x="{_f(x)}" y="{bottom + 18}" text-anchor="middle" font-family="sans-serif" '
            f'font-size="11">{escape(x_fmt(v))}</text>'
        )
    lines.append(f'<line class="axis" x1="{LEFT}" y1="{bottom}" x2="{LEFT + PLOT_W}" y2="{bottom}" stroke="#000000"/>')
    lines.append(f'<line class="axis" x1="{LEFT}" y1="{TOP}" x2="{LEFT}" y2="{bottom}" stroke="#000000"/>')
    lines.append(
        f'<text class="axis-label" x="{LEFT + PLOT_W / 2:.1f}" y="{HEIGHT - 20}" text-anchor="middle" '
        f'font-family="sans-serif" font-size="13">{escape(x_label)}</text>'
    )
    lines.append(
        f'<text class="axis-label" x="20" y="{TOP + PLOT_H / 2:.1f}" text-anchor="middle" font-family="sans-serif" '
        f'font-size="13" transform="rotate(-90 20 {TOP + PLOT_H / 2:.1f})">{escape(y_label)}</text>'
    )


def _curve(model: RegressionModel, x_lo: float, x_hi: float, steps: int = 64) -> list:
    if x_hi == x_lo:
        return [(x_lo, predict(model, x_lo))]
    return [(x_lo + (x_hi - x_lo) * i / steps, predict(model, x_lo + (x_hi - x_lo) * i / steps)) for i in range(steps + 1)]


def _path(points, ax: _Axes, transform=lambda v: v) -> str:
    cmds = [f"{'M' if i == 0 else 'L'}{_f(ax.px(x))},{_f(ax.py(transform(y)))}" for i, (x, y) in enumerate(points)]
    if len(cmds) == 1:
        cmds.append(cmds[0].replace("M", "L"))
    return " ".join(cmds)


def render_scree_svg(
    ordering: ScreeOrdering,
    model: RegressionModel,
    log_scale: bool = False,
    title: str = "Gross value added by scree rank",
) -> str:
    """Scree chart: GVA per rank as points and polyline, baseline dashed."""
    if len(ordering) == 0:
        raise ValueError("cannot render an empty scree ordering")
    ranks = ordering.ranks
    x_lo, x_hi = min(ranks), max(ranks)
    curve = _curve(model, x_lo, x_hi)
    values = ordering.values + [y for _, y in curve]

    if log_scale:
        if min(values) <= 0:
            raise ValueError("log-scale scree chart needs positive values")
        tf = math.log10
        lo = math.floor(math.log10(min(values)))
        hi = math.ceil(math.log10(max(values)))
        y_ticks = list(range(lo, hi + 1)) if hi > lo else [lo, lo + 1]
        y_fmt = lambda v: f"{10 ** v:g}"  # noqa: E731
        ax = _Axes(x_lo - 0.5, x_hi + 0.5, y_ticks[0], y_ticks[-1])
    else:
        tf = lambda v: v  # noqa: E731
        top = max(values) * 1.1 if max(values) > 0 else 1.0
        bottom = min(0.0, min(values))
        y_ticks = _ticks(bottom, top)
        y_fmt = lambda v: f"{v:.0f}"  # noqa: E731
        ax = _Axes(x_lo - 0.5, x_hi + 0.5, bottom, top)

    lines = _open(title)
    _frame(lines, ax, "Rank", "GVA", y_ticks, y_fmt, ranks)
    pts = " ".join(f"{_f(ax.px(r.rank))},{_f(ax.py(tf(r.value)))}" for r in ordering.ranked)
    lines.append(f'<polyline class="data-series" fill="none" stroke="{DATA_COLOR}" stroke-width="2" points="{pts}"/>')
    lines.append(
        f'<path class="baseline" fill="none" stroke="{BASELINE_COLOR}" stroke-width="2" stroke-dasharray="6 4" '
        f'd="{_path(curve, ax, tf)}"/>'
    )
    for r in ordering.ranked:
        lines.append(
            f'<circle class="data-point" cx="{_f(ax.px(r.rank))}" cy="{_f(ax.py(tf(r.value)))}" r="4" '
            f'fill="{DATA_COLOR}" data-rank="{r.rank}" data-value="{r.value!r}">'
            f"<title>{escape(r.id.slug)}</title></circle>"
        )
    lines.append("</svg>")
    return "\n".join(lines) + "\n"


def render_share_svg(entries: Sequence, model: Optional[RegressionModel] = None, title: str = "GVA share by industry") -> str:
    """K_GVA per industry ordinal with an optional dashed baseline."""
    if not entries:
        raise ValueError("cannot render an empty share spectrum")
    ordinals = [e.id.ordinal for e in entries]
    x_lo, x_hi = min(ordinals), max(ordinals)
    ax = _Axes(x_lo - 0.5, x_hi + 0.5, 0.0, 1.0)
    lines = _open(title)
    _frame(lines, ax, "Industry (N)", "GVA / OBP", _ticks(0.0, 1.0), lambda v: f"{v:.1f}", ordinals)
    pts = " ".join(f"{_f(ax.px(e.id.ordinal))},{_f(ax.py(e.k_gva))}" for e in entries)
    lines.append(f'<polyline class="data-series" fill="none" stroke="{DATA_COLOR}" stroke-width="2" points="{pts}"/>')
    if model is not None:
        lines.append(
            f'<path class="baseline" fill="none" stroke="{BASELINE_COLOR}" stroke-width="2" stroke-dasharray="6 4" '
            f'd="{_path(_curve(model, x_lo, x_hi), ax)}"/>'
        )
    for e in entries:
        lines.append(
            f'<circle class="data-point" cx="{_f(ax.px(e.id.ordinal))}" cy="{_f(ax.py(e.k_gva))}" r="4" '
            f'fill="{DATA_COLOR}" data-value="{e.k_gva!r}"><title>{escape(e.id.slug)}</title></circle>'
        )
    lines.append("</svg>")
    return "\n".join(lines) + "\n"


def render_irregularity_svg(
    entries: Sequence,
    tau: float = 0.1,
    symmetric: bool = False,
    title: str = "Irregularity coefficient by industry",
) -> str:
    """Lollipop chart of k_irr in entry order, with zero and threshold lines.

    Flagged entries get ``class="mark flagged"``; the exact value is kept in
    ``data-value`` and printed to 4 decimals above each mark.
    """
    if not entries:
        raise ValueError("cannot render an empty irregularity list")
    ks = [e.k_irr for e in entries]
    lo = min([0.0, tau, *ks] + ([-tau] if symmetric else []))
    hi = max([0.0, tau, *ks])
    pad = (hi - lo) * 0.1 or 0.1
    n = len(entries)
    ax = _Axes(0.5, n + 0.5, lo - pad, hi + pad)

    lines = _open(title)
    _frame(lines, ax, "Industry (M)", "K_irr", _ticks(lo - pad, hi + pad), lambda v: f"{v:.2f}", range(1, n + 1))
    zero_y = _f(ax.py(0.0))
    lines.append(
        f'<line class="zero-line" x1="{LEFT}" y1="{zero_y}" x2="{LEFT + PLOT_W}" y2="{zero_y}" stroke="#000000" '
        f'stroke-width="1.5"/>'
    )
    for t in [tau] + ([-tau] if symmetric else []):
        ty = _f(ax.py(t))
        lines.append(
            f'<line class="threshold" x1="{LEFT}" y1="{ty}" x2="{LEFT + PLOT_W}" y2="{ty}" stroke="{THRESHOLD_COLOR}" '
            f'stroke-dasharray="4 3" data-value="{t!r}"/>'
        )
    for i, e in enumerate(entries, start=1):
        x = _f(ax.px(i))
        y = _f(ax.py(e.k_irr))
        cls = "mark flagged" if e.flagged else "mark"
        color = FLAG_COLOR if e.flagged else DATA_COLOR
        lines.append(f'<line class="stem" x1="{x}" y1="{zero_y}" x2="{x}" y2="{y}" stroke="{color}" stroke-width="2"/>')
        lines.append(
            f'<circle class={quoteattr(cls)} cx="{x}" cy="{y}" r="5" fill="{color}" data-value="{e.k_irr!r}">'
            f"<title>{escape(e.id.slug)}</title></circle>"
        )
        label_y = _f(ax.py(e.k_irr) + (-10 if e.k_irr >= 0 else 18))
        lines.append(
            f'<text class="value-label" x="{x}" y="{label_y}" text-anchor="middle" font-family="sans-serif" '
            f'font-size="10">{e.k_irr:.4f}</text>'
        )
    lines.append("</svg>")
    return "\n".join(lines) + "\n"
