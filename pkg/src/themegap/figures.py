"""Matplotlib renderers for embedding scatters and metric series.

Renderers return standalone SVG bytes and are byte-deterministic for equal
inputs: the SVG hash salt is pinned, creation dates are omitted, and text
stays text instead of being outlined into paths.  Plot elements carry
stable ``id`` attributes (markers per leaning, one label per outlet, one
polyline per unbroken series run) so output can be inspected structurally.
"""

from __future__ import annotations

import io
import re
from typing import Mapping, Sequence

import matplotlib
from matplotlib.figure import Figure
from matplotlib.ticker import MaxNLocator

from .ca import NEGLIGIBLE_INERTIA, CaEmbedding
from .corpus import Leaning, OutletInfo
from .errors import ConfigError, ReportError
from .metrics import DiscrepancySeries

DEFAULT_WIDTH = 800
DEFAULT_HEIGHT = 600

_MARKERS = {Leaning.LEFT: "o", Leaning.CENTRAL: "s", Leaning.RIGHT: "^"}
_COLORS = {Leaning.LEFT: "#1f77b4", Leaning.CENTRAL: "#555555", Leaning.RIGHT: "#d62728"}
_SERIES_COLORS = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#8c564b", "#e377c2")

_RC = {
    "svg.hashsalt": "themegap",
    "svg.fonttype": "none",
    "font.family": "sans-serif",
    "font.size": 10.0,
    "figure.facecolor": "white",
    "axes.grid": False,
}


def _slug(text: str) -> str:
    return re.sub(r"[^0-9A-Za-z]+", "-", text).strip("-").lower() or "x"


def _new_axes(width: int, height: int):
    fig = Figure(figsize=(width / 100.0, height / 100.0), dpi=100)
    return fig, fig.add_subplot()


def _to_svg(fig: Figure) -> bytes:
    buf = io.BytesIO()
    fig.savefig(buf, format="svg", metadata={"Date": None})
    return buf.getvalue()


def render_scatter(
    emb: CaEmbedding,
    outlets: Sequence[OutletInfo],
    *,
    width: int = DEFAULT_WIDTH,
    height: int = DEFAULT_HEIGHT,
    title: str | None = None,
) -> bytes:
    """Render one unit's outlet embedding as an SVG scatter plot.

    Marker shape and color encode each outlet's leaning; every point gets a
    text label with the outlet name.  Axes are scaled to the data with a
    10% margin and axis titles carry each dimension's inertia share.
    """
    leaning_of: Mapping[str, Leaning] = {o.name: o.leaning for o in outlets}
    missing = sorted(set(emb.outlet_points) - set(leaning_of))
    if missing:
        raise ConfigError("no leaning configured for: " + ", ".join(missing))

    with matplotlib.rc_context(_RC):
        fig, ax = _new_axes(width, height)
        for leaning in Leaning:
            members = [o for o in emb.outlet_points if leaning_of[o] is leaning]
            if not members:
                continue
            xs = [emb.outlet_points[o][0] for o in members]
            ys = [emb.outlet_points[o][1] for o in members]
            coll = ax.scatter(
                xs, ys, marker=_MARKERS[leaning], c=_COLORS[leaning],
                s=60, zorder=3, label=leaning.value,
            )
            coll.set_gid(f"leaning-{leaning.value}")
        for name, (x, y) in emb.outlet_points.items():
            ann = ax.annotate(
                name, (x, y), xytext=(5, 5), textcoords="offset points", fontsize=9,
            )
            ann.set_gid(f"outlet-label-{_slug(name)}")
        ax.axhline(0.0, color="#cccccc", linewidth=0.8, zorder=1)
        ax.axvline(0.0, color="#cccccc", linewidth=0.8, zorder=1)
        ax.margins(0.10)
        total = emb.total_inertia
        for d, setter in enumerate((ax.set_xlabel, ax.set_ylabel)):
            share = (
                f" ({100.0 * emb.singular_values[d] ** 2 / total:.1f}% of inertia)"
                if total > NEGLIGIBLE_INERTIA else ""
            )
            setter(f"dimension {d + 1}{share}")
        ax.set_title(title if title is not None else f"{emb.topic.value} {emb.year}")
        ax.legend(loc="best")
        return _to_svg(fig)


def render_series(
    series: Sequence[DiscrepancySeries],
    *,
    width: int = DEFAULT_WIDTH,
    height: int = DEFAULT_HEIGHT,
    title: str | None = None,
    ylabel: str | None = None,
) -> bytes:
    """Render metric series as SVG, one line per series, gaps left open.

    Every non-gap point gets a marker; line segments connect only runs of
    consecutive years with values, so a gap year visibly breaks the line.
    A series with no non-gap point cannot be drawn and is refused.
    """
    if not series:
        raise ReportError("no series to render")
    empty = [s.label() for s in series if not s.defined_years()]
    if empty:
        raise ReportError("series with no defined values: " + "; ".join(empty))

    with matplotlib.rc_context(_RC):
        fig, ax = _new_axes(width, height)
        for idx, s in enumerate(series):
            color = _SERIES_COLORS[idx % len(_SERIES_COLORS)]
            slug = _slug(s.label())
            years = sorted(s.values)
            runs: list[list[int]] = []
            for y in years:
                if s.values[y] is None:
                    continue
                if runs and runs[-1][-1] == y - 1:
                    runs[-1].append(y)
                else:
                    runs.append([y])
            seg_idx = 0
            for run in runs:
                if len(run) < 2:
                    continue
                (line,) = ax.plot(
                    run, [s.values[y] for y in run],
                    color=color, linewidth=1.5, label="_nolegend_",
                )
                line.set_gid(f"series-{slug}-seg{seg_idx}")
                seg_idx += 1
            defined = s.defined_years()
            (points,) = ax.plot(
                defined, [s.values[y] for y in defined],
                linestyle="none", marker="o", markersize=5,
                color=color, label=s.label(),
            )
            points.set_gid(f"series-{slug}-points")
        ax.xaxis.set_major_locator(MaxNLocator(integer=True))
        ax.set_xlabel("year")
        if ylabel is None:
            kinds = {s.kind.value for s in series}
            ylabel = kinds.pop() if len(kinds) == 1 else "value"
        ax.set_ylabel(ylabel)
        if title is not None:
            ax.set_title(title)
        ax.legend(loc="best")
        return _to_svg(fig)
