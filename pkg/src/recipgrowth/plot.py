"""Plot data (CSV) and dependency-free SVG figures in direct or reciprocal space."""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass
from xml.sax.saxutils import escape

import numpy as np

from .fit import HyperbolicFit, singularity_time
from .segment import SegmentedFit
from .series import TimeSeries

SPACES = ("direct", "reciprocal")


@dataclass(frozen=True)
class PlotRow:
    t: float
    observed: float | None
    model: float | None
    segment: int | None = None


@dataclass(frozen=True)
class PlotData:
    rows: tuple[PlotRow, ...]
    space: str
    singularity: float | None = None

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["t", "observed", "model"])
        for r in self.rows:
            w.writerow([repr(r.t),
                        "" if r.observed is None else repr(r.observed),
                        "" if r.model is None else repr(r.model)])
        return buf.getvalue()


def _fits(model) -> list[HyperbolicFit]:
    return list(model.segments) if isinstance(model, SegmentedFit) else [model]


def _segment_of(t: float, breaks) -> int:
    return sum(1 for b in breaks if t >= b)


def plot_data(series: TimeSeries, model: HyperbolicFit | SegmentedFit, space: str = "reciprocal",
              n_grid: int = 200) -> PlotData:
    """Observed values and the model, both in ``space``, on the observed years
    plus ``n_grid`` evenly spaced years across the fit window."""
    if space not in SPACES:
        raise ValueError(f"space must be one of {SPACES}, got {space!r}")
    fits = _fits(model)
    breaks = model.breakpoints if isinstance(model, SegmentedFit) else ()
    lo, hi = fits[0].window[0], fits[-1].window[1]
    if len(series) == 0:
        raise ValueError("series is empty")
    t_obs = series.t
    if math.isnan(lo) or math.isnan(hi):
        lo, hi = float(t_obs[0]), float(t_obs[-1])
    if hi < t_obs[0] or lo > t_obs[-1]:
        raise ValueError(f"fit window {lo}..{hi} does not overlap the series "
                         f"({t_obs[0]}..{t_obs[-1]})")

    observed = {p.t: p.value for p in series.points}
    years = sorted(set(observed) | set(np.linspace(lo, hi, n_grid).tolist()))

    rows = []
    for t in years:
        k = _segment_of(t, breaks)
        line = fits[k].a0 + fits[k].a1 * t
        obs = observed.get(t)
        if space == "reciprocal":
            mval = line
            oval = None if obs is None else 1.0 / obs
        else:
            mval = 1.0 / line if line > 0 else None
            oval = obs
        rows.append(PlotRow(float(t), oval, mval, k))
    return PlotData(tuple(rows), space, singularity_time(fits[-1]))


def emit_plot_data(series: TimeSeries, model, space: str = "reciprocal", n_grid: int = 200) -> str:
    return plot_data(series, model, space, n_grid).to_csv()


def parse_plot_csv(text: str) -> list[tuple[float, float | None, float | None]]:
    rows = list(csv.reader(io.StringIO(text)))
    if rows[0] != ["t", "observed", "model"]:
        raise ValueError("plot CSV must start with the header t,observed,model")

    def num(s):
        return float(s) if s else None

    return [(float(a), num(b), num(c)) for a, b, c in rows[1:]]


# -- SVG ------------------------------------------------------------------------

WIDTH, HEIGHT = 800, 500
LEFT, RIGHT, TOP, BOTTOM = 80, 30, 40, 60


def _nice_ticks(lo: float, hi: float, n: int = 5) -> list[float]:
    span = hi - lo
    if span <= 0:
        return [lo]
    raw = span / n
    mag = 10 ** math.floor(math.log10(raw))
    step = min((m * mag for m in (1, 2, 2.5, 5, 10) if m * mag >= raw), default=10 * mag)
    start = math.ceil(lo / step) * step
    return [start + i * step for i in range(int((hi - start) / step + 1e-9) + 1)]


def _fmt(x: float) -> str:
    return f"{x:.4g}"


def _range(values, margin=0.05):
    lo, hi = min(values), max(values)
    if hi == lo:
        pad = abs(lo) * 0.05 or 1.0
        return lo - pad, hi + pad
    pad = (hi - lo) * margin
    return lo - pad, hi + pad


def emit_svg(plot: PlotData, x_label: str = "year", y_label: str = "", title: str = "") -> str:
    """Standalone SVG 1.1: observed markers, model polyline, and a dashed
    vertical line at the singularity when it falls inside the x range."""
    if not plot.rows:
        raise ValueError("plot data is empty")
    ts = [r.t for r in plot.rows]
    obs = [r.observed for r in plot.rows if r.observed is not None]
    mod = [r.model for r in plot.rows if r.model is not None]
    x0, x1 = _range(ts)
    ys = obs + mod
    if obs and mod:
        # keep a model that runs off to infinity from flattening the data
        cap = max(obs) + 2 * (max(obs) - min(obs) or abs(max(obs)))
        floor = min(obs) - 2 * (max(obs) - min(obs) or abs(min(obs)))
        ys = obs + [min(max(m, floor), cap) for m in mod]
    y0, y1 = _range(ys)

    pw, ph = WIDTH - LEFT - RIGHT, HEIGHT - TOP - BOTTOM

    def px(x):
        return LEFT + (x - x0) / (x1 - x0) * pw

    def py(y):
        return TOP + ph - (y - y0) / (y1 - y0) * ph

    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{WIDTH}" '
        f'height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">',
        '<defs><clipPath id="plot-area">'
        f'<rect x="{LEFT}" y="{TOP}" width="{pw}" height="{ph}"/></clipPath></defs>',
        f'<rect x="0" y="0" width="{WIDTH}" height="{HEIGHT}" fill="white"/>',
        f'<rect x="{LEFT}" y="{TOP}" width="{pw}" height="{ph}" fill="none" stroke="black"/>',
    ]
    if title:
        out.append(f'<text x="{WIDTH / 2}" y="24" text-anchor="middle" font-size="16" '
                   f'font-family="sans-serif">{escape(title)}</text>')
    for xt in _nice_ticks(x0, x1):
        out.append(f'<line x1="{px(xt):.2f}" y1="{TOP + ph}" x2="{px(xt):.2f}" '
                   f'y2="{TOP + ph + 5}" stroke="black"/>')
        out.append(f'<text x="{px(xt):.2f}" y="{TOP + ph + 20}" text-anchor="middle" '
                   f'font-size="11" font-family="sans-serif">{_fmt(xt)}</text>')
    for yt in _nice_ticks(y0, y1):
        out.append(f'<line x1="{LEFT - 5}" y1="{py(yt):.2f}" x2="{LEFT}" y2="{py(yt):.2f}" '
                   f'stroke="black"/>')
        out.append(f'<text x="{LEFT - 8}" y="{py(yt) + 4:.2f}" text-anchor="end" '
                   f'font-size="11" font-family="sans-serif">{_fmt(yt)}</text>')
    out.append(f'<text x="{LEFT + pw / 2}" y="{HEIGHT - 15}" text-anchor="middle" '
               f'font-size="13" font-family="sans-serif">{escape(x_label)}</text>')
    out.append(f'<text x="18" y="{TOP + ph / 2}" text-anchor="middle" font-size="13" '
               f'font-family="sans-serif" transform="rotate(-90 18 {TOP + ph / 2})">'
               f'{escape(y_label)}</text>')

    # one polyline per run of defined model values within a segment
    runs, cur, seg = [], [], None
    for r in plot.rows:
        if r.model is None or (cur and r.segment != seg):
            if len(cur) > 1:
                runs.append(cur)
            cur = []
        if r.model is not None:
            cur.append(r)
            seg = r.segment
    if len(cur) > 1:
        runs.append(cur)
    for run in runs:
        pts = " ".join(f"{px(r.t):.2f},{py(r.model):.2f}" for r in run)
        out.append(f'<polyline class="model" points="{pts}" fill="none" stroke="#d62728" '
                   f'stroke-width="1.5" clip-path="url(#plot-area)"/>')

    for r in plot.rows:
        if r.observed is not None:
            out.append(f'<circle class="observed" cx="{px(r.t):.2f}" cy="{py(r.observed):.2f}" '
                       f'r="3.5" fill="#1f77b4"/>')

    s = plot.singularity
    if s is not None and x0 <= s <= x1:
        out.append(f'<line class="singularity" x1="{px(s):.2f}" y1="{TOP}" x2="{px(s):.2f}" '
                   f'y2="{TOP + ph}" stroke="gray" stroke-dasharray="6,4"/>')
    out.append("</svg>")
    return "\n".join(out) + "\n"
