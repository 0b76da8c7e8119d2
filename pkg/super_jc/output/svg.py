"""
Standalone SVG plots: heatmaps of detuning scans and line plots of cuts and traces.
"""
import os
import logging
from xml.sax.saxutils import escape

import numpy as np

from super_jc.errors import OutputError

logger = logging.getLogger(__name__)

# Fixed colormap, value -> colour by linear interpolation between stops
COLORMAP = (
    (0.00, (48, 18, 59)),
    (0.25, (40, 120, 220)),
    (0.50, (30, 200, 160)),
    (0.75, (240, 200, 40)),
    (1.00, (180, 20, 10)),
)
LINE_COLORS = ('#1f4e9c', '#c0392b', '#27ae60', '#8e44ad', '#d68910')


def colormap(value):
    """Hex colour of a value in [0, 1]."""
    value = min(max(float(value), 0.0), 1.0)
    stops = [s for s, _ in COLORMAP]
    k = min(int(np.searchsorted(stops, value, side='right')), len(stops) - 1)
    (s0, c0), (s1, c1) = COLORMAP[k - 1], COLORMAP[k]
    f = 0.0 if s1 == s0 else (value - s0) / (s1 - s0)
    r, g, b = (int(round(a + f * (b - a))) for a, b in zip(c0, c1))
    return f"#{r:02x}{g:02x}{b:02x}"


class SvgBuilder:
    """Accumulates SVG elements into a document."""

    def __init__(self, width, height):
        self.width = width
        self.height = height
        self.parts = []

    def rect(self, x, y, width, height, fill, stroke='none'):
        self.parts.append(
            f'<rect x="{x:.2f}" y="{y:.2f}" width="{width:.2f}" height="{height:.2f}" '
            f'fill="{fill}" stroke="{stroke}"/>'
        )

    def line(self, x1, y1, x2, y2, stroke='#000000', width=1):
        self.parts.append(
            f'<line x1="{x1:.2f}" y1="{y1:.2f}" x2="{x2:.2f}" y2="{y2:.2f}" '
            f'stroke="{stroke}" stroke-width="{width}"/>'
        )

    def polyline(self, points, stroke='#000000', width=1.5):
        coords = ' '.join(f"{x:.2f},{y:.2f}" for x, y in points)
        self.parts.append(f'<polyline points="{coords}" fill="none" stroke="{stroke}" stroke-width="{width}"/>')

    def text(self, x, y, string, size=12, anchor='middle', angle=None):
        transform = f' transform="rotate({angle} {x:.2f} {y:.2f})"' if angle else ''
        self.parts.append(
            f'<text x="{x:.2f}" y="{y:.2f}" font-family="sans-serif" font-size="{size}" '
            f'text-anchor="{anchor}"{transform}>{escape(str(string))}</text>'
        )

    def get_svg(self):
        head = (
            '<?xml version="1.0" encoding="UTF-8" standalone="no"?>\n'
            f'<svg version="1.1" width="{self.width}" height="{self.height}" '
            f'viewBox="0 0 {self.width} {self.height}" xmlns="http://www.w3.org/2000/svg">\n'
        )
        return head + '\n'.join(self.parts) + '\n</svg>\n'

    def write(self, path):
        try:
            parent = os.path.dirname(os.path.abspath(path))
            os.makedirs(parent, exist_ok=True)
            with open(path, 'w', encoding='utf-8', newline='') as f:
                f.write(self.get_svg())
        except OSError as e:
            raise OutputError(f"cannot write {path}: {e}") from e
        logger.info(f"Wrote plot {path}")
        return path


MARGIN_LEFT, MARGIN_RIGHT, MARGIN_TOP, MARGIN_BOTTOM = 70, 90, 30, 60


def _axes(svg, x0, y0, w, h, x_range, y_range, x_label, y_label, ticks=5):
    svg.rect(x0, y0, w, h, fill='none', stroke='#000000')
    for k in range(ticks + 1):
        f = k / ticks
        xv = x_range[0] + f * (x_range[1] - x_range[0])
        yv = y_range[0] + f * (y_range[1] - y_range[0])
        svg.line(x0 + f * w, y0 + h, x0 + f * w, y0 + h + 5)
        svg.text(x0 + f * w, y0 + h + 18, f"{xv:.3g}", size=10)
        svg.line(x0 - 5, y0 + h - f * h, x0, y0 + h - f * h)
        svg.text(x0 - 8, y0 + h - f * h + 4, f"{yv:.3g}", size=10, anchor='end')
    svg.text(x0 + w / 2, y0 + h + 42, x_label)
    svg.text(x0 - 50, y0 + h / 2, y_label, angle=-90)


def heatmap(matrix, x_values, y_values, path, x_label='delta2 / Lambda', y_label='delta1 / Lambda',
            title=None, width=640, height=560):
    """
    Colour map of matrix[i, j] at (x_values[j], y_values[i]), values clipped to [0, 1].

    Rows run along y (delta1 upwards), columns along x.
    """
    matrix = np.asarray(matrix, dtype=float)
    x_values = np.asarray(x_values, dtype=float)
    y_values = np.asarray(y_values, dtype=float)
    n_rows, n_cols = matrix.shape

    svg = SvgBuilder(width, height)
    x0, y0 = MARGIN_LEFT, MARGIN_TOP
    w = width - MARGIN_LEFT - MARGIN_RIGHT
    h = height - MARGIN_TOP - MARGIN_BOTTOM
    cell_w, cell_h = w / n_cols, h / n_rows

    for i in range(n_rows):
        for j in range(n_cols):
            svg.rect(x0 + j * cell_w, y0 + h - (i + 1) * cell_h, cell_w + 0.05, cell_h + 0.05,
                     fill=colormap(matrix[i, j]))

    _axes(svg, x0, y0, w, h, (x_values[0], x_values[-1]), (y_values[0], y_values[-1]), x_label, y_label)

    # Colour bar
    bar_x, steps = x0 + w + 20, 50
    for k in range(steps):
        svg.rect(bar_x, y0 + h - (k + 1) * h / steps, 15, h / steps + 0.05, fill=colormap((k + 0.5) / steps))
    svg.rect(bar_x, y0, 15, h, fill='none', stroke='#000000')
    svg.text(bar_x + 20, y0 + h, "0", size=10, anchor='start')
    svg.text(bar_x + 20, y0 + 8, "1", size=10, anchor='start')
    if title:
        svg.text(width / 2, 20, title, size=14)
    return svg.write(path)


def line_plot(x, series, path, x_label='delta1 / Lambda', y_label='max P_x', title=None,
              markers=(), width=640, height=420):
    """
    Line plot of one or more named series sharing the x samples.

    Args:
        x: Common abscissa
        series: Mapping of label -> y values
        markers: x positions marked with vertical lines (e.g. detected peaks)
    """
    x = np.asarray(x, dtype=float)
    svg = SvgBuilder(width, height)
    x0, y0 = MARGIN_LEFT, MARGIN_TOP
    w = width - MARGIN_LEFT - MARGIN_RIGHT
    h = height - MARGIN_TOP - MARGIN_BOTTOM

    values = [np.asarray(v, dtype=float) for v in series.values()]
    y_lo = min(0.0, min(float(v.min()) for v in values))
    y_hi = max(float(v.max()) for v in values)
    y_hi = y_hi if y_hi > y_lo else y_lo + 1.0
    x_lo, x_hi = float(x[0]), float(x[-1])
    x_span = (x_hi - x_lo) or 1.0

    def to_px(xv, yv):
        return x0 + (xv - x_lo) / x_span * w, y0 + h - (yv - y_lo) / (y_hi - y_lo) * h

    for pos in markers:
        px, _ = to_px(pos, y_lo)
        svg.line(px, y0, px, y0 + h, stroke='#999999')
    for k, (label, v) in enumerate(zip(series.keys(), values)):
        color = LINE_COLORS[k % len(LINE_COLORS)]
        svg.polyline([to_px(a, b) for a, b in zip(x, v)], stroke=color)
        svg.text(x0 + w + 5, y0 + 14 * (k + 1), label, size=10, anchor='start')
        svg.line(x0 + w + 5, y0 + 14 * (k + 1) + 3, x0 + w + 25, y0 + 14 * (k + 1) + 3, stroke=color, width=2)

    _axes(svg, x0, y0, w, h, (x_lo, x_hi), (y_lo, y_hi), x_label, y_label)
    if title:
        svg.text(width / 2, 20, title, size=14)
    return svg.write(path)
