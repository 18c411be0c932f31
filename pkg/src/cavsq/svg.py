"""Minimal deterministic SVG line plots for CSV tables.

Hand-rolled on purpose: identical inputs must produce byte-identical output,
which rules out plotting libraries that embed ids or timestamps.
"""

from __future__ import annotations

import math

from .errors import ConfigError

_WIDTH, _HEIGHT = 640, 480
_MARGIN_L, _MARGIN_R, _MARGIN_T, _MARGIN_B = 70, 20, 30, 50
_COLORS = ("#1f6fb4", "#d95319", "#2b8c3e", "#7b3fa0", "#c0a000", "#4ab3c8")


def _fmt(v: float) -> str:
    return f"{v:.6g}"


def _transform(vals, lo, hi, out_lo, out_hi, log):
    if log:
        lo, hi = math.log10(lo), math.log10(hi)
        vals = [math.log10(v) for v in vals]
    span = hi - lo
    if span == 0.0:
        return [0.5 * (out_lo + out_hi) for _ in vals]
    return [out_lo + (v - lo) / span * (out_hi - out_lo) for v in vals]


def emit_svg(
    table,
    x_col: str,
    y_cols,
    log_x: bool = False,
    log_y: bool = False,
    title: str = "",
) -> str:
    """Single-panel line plot of the named columns as an SVG document.

    Non-finite points (and non-positive ones on log axes) are dropped per
    series.  Unknown columns or no plottable data raise ConfigError.
    """
    if isinstance(y_cols, str):
        y_cols = [y_cols]
    for col in [x_col, *y_cols]:
        if col not in table.header:
            raise ConfigError(f"unknown column {col!r}; table has {', '.join(table.header)}")
    if not table.rows:
        raise ConfigError("no data rows to plot")
    ix = table.header.index(x_col)
    series = []
    for col in y_cols:
        iy = table.header.index(col)
        pts = []
        for row in table.rows:
            xv, yv = row[ix], row[iy]
            if not (math.isfinite(xv) and math.isfinite(yv)):
                continue
            if (log_x and xv <= 0) or (log_y and yv <= 0):
                continue
            pts.append((xv, yv))
        series.append((col, pts))
    all_pts = [p for _, pts in series for p in pts]
    if not all_pts:
        raise ConfigError("no plottable points after filtering")

    x_lo, x_hi = min(p[0] for p in all_pts), max(p[0] for p in all_pts)
    y_lo, y_hi = min(p[1] for p in all_pts), max(p[1] for p in all_pts)
    if x_lo == x_hi:
        pad = abs(x_lo) * 0.05 or 1.0
        x_lo, x_hi = x_lo - pad, x_hi + pad
    if y_lo == y_hi:
        pad = abs(y_lo) * 0.05 or 1.0
        y_lo, y_hi = y_lo - pad, y_hi + pad

    px_lo, px_hi = _MARGIN_L, _WIDTH - _MARGIN_R
    py_lo, py_hi = _HEIGHT - _MARGIN_B, _MARGIN_T  # y axis points up

    parts = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{_WIDTH}" height="{_HEIGHT}" '
        f'viewBox="0 0 {_WIDTH} {_HEIGHT}">',
        f'<rect x="0" y="0" width="{_WIDTH}" height="{_HEIGHT}" fill="white"/>',
        f'<rect x="{px_lo}" y="{py_hi}" width="{px_hi - px_lo}" height="{py_lo - py_hi}" '
        'fill="none" stroke="#333333" stroke-width="1"/>',
    ]
    if title:
        parts.append(
            f'<text x="{_WIDTH // 2}" y="20" text-anchor="middle" '
            f'font-family="monospace" font-size="13">{title}</text>'
        )
    axis_note = lambda log: " (log)" if log else ""
    parts.append(
        f'<text x="{(px_lo + px_hi) // 2}" y="{_HEIGHT - 12}" text-anchor="middle" '
        f'font-family="monospace" font-size="12">{x_col}{axis_note(log_x)}</text>'
    )
    parts.append(
        f'<text x="16" y="{(py_lo + py_hi) // 2}" text-anchor="middle" '
        f'font-family="monospace" font-size="12" '
        f'transform="rotate(-90 16 {(py_lo + py_hi) // 2})">{",".join(y_cols)}{axis_note(log_y)}</text>'
    )
    # corner tick labels
    for val, x, y, anchor in (
        (x_lo, px_lo, py_lo + 16, "middle"),
        (x_hi, px_hi, py_lo + 16, "middle"),
    ):
        parts.append(
            f'<text x="{x}" y="{y}" text-anchor="{anchor}" '
            f'font-family="monospace" font-size="11">{_fmt(val)}</text>'
        )
    for val, y in ((y_lo, py_lo), (y_hi, py_hi + 10)):
        parts.append(
            f'<text x="{px_lo - 6}" y="{y}" text-anchor="end" '
            f'font-family="monospace" font-size="11">{_fmt(val)}</text>'
        )
    for idx, (col, pts) in enumerate(series):
        if not pts:
            continue
        xs = _transform([p[0] for p in pts], x_lo, x_hi, px_lo, px_hi, log_x)
        ys = _transform([p[1] for p in pts], y_lo, y_hi, py_lo, py_hi, log_y)
        coords = " ".join(f"{_fmt(x)},{_fmt(y)}" for x, y in zip(xs, ys))
        color = _COLORS[idx % len(_COLORS)]
        parts.append(
            f'<polyline points="{coords}" fill="none" stroke="{color}" stroke-width="1.5"/>'
        )
        parts.append(
            f'<text x="{px_hi - 4}" y="{py_hi + 14 + 14 * idx}" text-anchor="end" '
            f'font-family="monospace" font-size="11" fill="{color}">{col}</text>'
        )
    parts.append("</svg>")
    return "\n".join(parts) + "\n"
