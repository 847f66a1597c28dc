"""Deterministic SVG rendering of control charts and landmark trajectories.

Control charts draw the T-squared series as a single polyline, the UCL as
a horizontal line, and one marker per warning. Trajectories are drawn as
three orthogonal 2D projections (x-y, x-z, y-z), one polyline per
landmark per panel. Coordinates are formatted with fixed precision so
identical inputs yield identical bytes.
"""

from __future__ import annotations

from dataclasses import dataclass
from xml.sax.saxutils import escape

import numpy as np

from .errors import EmptySeries, EmptyStream
from .hotelling import TsquaredSeries
from .landmarks import LandmarkSelection, LandmarkStream, landmark_name, select_features

# Fixed palette indexed by landmark id for run-to-run stability.
PALETTE = (
    "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd",
    "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf",
)

MARGIN = 48.0


@dataclass(frozen=True)
class ChartSpec:
    title: str = ""
    width: int = 900
    height: int = 360
    x_label: str = "frame"
    y_label: str = "value"
    marker_radius: float = 4.0

    def __post_init__(self):
        if self.width <= 0 or self.height <= 0:
            raise ValueError("chart dimensions must be positive")


def _fmt(v: float) -> str:
    return f"{v:.2f}"


def _scale(values: np.ndarray, lo: float, hi: float, out_lo: float, out_hi: float) -> np.ndarray:
    span = hi - lo
    if span == 0:
        return np.full_like(values, (out_lo + out_hi) / 2.0)
    return out_lo + (values - lo) / span * (out_hi - out_lo)


def _svg_open(width: int, height: int, title: str) -> list[str]:
    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}">',
        f'<rect width="{width}" height="{height}" fill="white"/>',
    ]
    if title:
        parts.append(
            f'<text x="{_fmt(width / 2)}" y="20" text-anchor="middle" '
            f'font-family="sans-serif" font-size="14">{escape(title)}</text>'
        )
    return parts


def _axis_labels(parts: list[str], spec: ChartSpec, x_label: str, y_label: str) -> None:
    parts.append(
        f'<text x="{_fmt(spec.width / 2)}" y="{_fmt(spec.height - 8)}" text-anchor="middle" '
        f'font-family="sans-serif" font-size="11">{escape(x_label)}</text>'
    )
    parts.append(
        f'<text x="14" y="{_fmt(spec.height / 2)}" text-anchor="middle" '
        f'font-family="sans-serif" font-size="11" '
        f'transform="rotate(-90 14 {_fmt(spec.height / 2)})">{escape(y_label)}</text>'
    )


def render_control_chart(series: TsquaredSeries, ucl: float, spec: ChartSpec | None = None) -> str:
    """SVG control chart: series polyline, UCL line, one marker per warning."""
    if len(series) == 0:
        raise EmptySeries("cannot chart an empty series")
    spec = spec or ChartSpec(y_label="T-squared")
    x = np.asarray(series.frame_indices, dtype=float)
    y = np.asarray(series.values, dtype=float)

    x_lo, x_hi = float(x.min()), float(x.max())
    y_lo, y_hi = 0.0, float(max(y.max(), ucl) * 1.05)
    px = _scale(x, x_lo, x_hi, MARGIN, spec.width - MARGIN / 2)
    py = _scale(y, y_lo, y_hi, spec.height - MARGIN, MARGIN / 2)
    ucl_y = _scale(np.array([ucl]), y_lo, y_hi, spec.height - MARGIN, MARGIN / 2)[0]

    parts = _svg_open(spec.width, spec.height, spec.title)
    _axis_labels(parts, spec, spec.x_label, spec.y_label)
    points = " ".join(f"{_fmt(a)},{_fmt(b)}" for a, b in zip(px, py))
    parts.append(
        f'<polyline points="{points}" fill="none" stroke="{PALETTE[0]}" stroke-width="1"/>'
    )
    parts.append(
        f'<line x1="{_fmt(MARGIN)}" y1="{_fmt(ucl_y)}" '
        f'x2="{_fmt(spec.width - MARGIN / 2)}" y2="{_fmt(ucl_y)}" '
        f'stroke="{PALETTE[3]}" stroke-width="1" stroke-dasharray="6,3"/>'
    )
    parts.append(
        f'<text x="{_fmt(spec.width - MARGIN / 2)}" y="{_fmt(ucl_y - 4)}" text-anchor="end" '
        f'font-family="sans-serif" font-size="10" fill="{PALETTE[3]}">UCL={ucl:.3f}</text>'
    )
    for a, b, value in zip(px, py, y):
        if value > ucl:
            parts.append(
                f'<circle class="warning" cx="{_fmt(a)}" cy="{_fmt(b)}" '
                f'r="{_fmt(spec.marker_radius)}" fill="none" stroke="{PALETTE[3]}" '
                f'stroke-width="1.5"/>'
            )
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


_PANELS = (("x", "y", 0, 1), ("x", "z", 0, 2), ("y", "z", 1, 2))


def render_trajectory(
    stream: LandmarkStream,
    selection: LandmarkSelection,
    spec: ChartSpec | None = None,
) -> str:
    """SVG with x-y, x-z, y-z projection panels of each landmark's path."""
    if not stream.frames:
        raise EmptyStream("cannot render an empty stream")
    spec = spec or ChartSpec(width=1080, height=400)
    features = select_features(stream, selection)
    n = features.n
    k = len(selection)
    positions = features.values.reshape(n, k, 3)

    panel_w = spec.width / 3.0
    parts = _svg_open(spec.width, spec.height, spec.title)
    for panel_i, (ax_a, ax_b, ia, ib) in enumerate(_PANELS):
        x0 = panel_i * panel_w
        a = positions[:, :, ia]
        b = positions[:, :, ib]
        a_lo, a_hi = float(a.min()), float(a.max())
        b_lo, b_hi = float(b.min()), float(b.max())
        parts.append(
            f'<text x="{_fmt(x0 + panel_w / 2)}" y="{_fmt(spec.height - 10)}" '
            f'text-anchor="middle" font-family="sans-serif" font-size="11">'
            f"{ax_a}-{ax_b}</text>"
        )
        for j, lid in enumerate(selection.ids):
            color = PALETTE[lid % len(PALETTE)]
            pa = _scale(a[:, j], a_lo, a_hi, x0 + MARGIN / 2, x0 + panel_w - MARGIN / 2)
            pb = _scale(b[:, j], b_lo, b_hi, spec.height - MARGIN, MARGIN / 2)
            points = " ".join(f"{_fmt(u)},{_fmt(v)}" for u, v in zip(pa, pb))
            parts.append(
                f'<polyline class="trajectory" points="{points}" fill="none" '
                f'stroke="{color}" stroke-width="1"/>'
            )
    # Legend along the top edge.
    for j, lid in enumerate(selection.ids):
        color = PALETTE[lid % len(PALETTE)]
        lx = MARGIN / 2 + j * (spec.width - MARGIN) / max(1, len(selection.ids))
        parts.append(
            f'<rect x="{_fmt(lx)}" y="26" width="10" height="10" fill="{color}"/>'
        )
        parts.append(
            f'<text x="{_fmt(lx + 14)}" y="35" font-family="sans-serif" '
            f'font-size="10">{escape(landmark_name(lid))}</text>'
        )
    parts.append("</svg>")
    return "\n".join(parts) + "\n"
