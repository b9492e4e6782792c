"""Minimal hand-rolled SVG heatmap for phase diagrams (no plotting deps)."""

from __future__ import annotations

from pathlib import Path

from .phases import PhaseDiagram

_PALETTE = {
    0: "#f7f4f9",
    1: "#d4b9da",
    2: "#c994c7",
    3: "#df65b0",
    4: "#ce1256",
}
_FALLBACK = "#404040"

_CELL = 14
_MARGIN_LEFT = 64
_MARGIN_BOTTOM = 46
_MARGIN_TOP = 18
_MARGIN_RIGHT = 96


def _color(value: int) -> str:
    return _PALETTE.get(int(value), _FALLBACK)


def heatmap_svg(diagram: PhaseDiagram, hr: float) -> str:
    """Render one filled rectangle per grid cell, axes labelled in units of hr."""
    nx, ny = diagram.chern_grid.shape
    width = _MARGIN_LEFT + nx * _CELL + _MARGIN_RIGHT
    height = _MARGIN_TOP + ny * _CELL + _MARGIN_BOTTOM
    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}">',
        f'<rect width="{width}" height="{height}" fill="white"/>',
    ]
    for i in range(nx):
        for j in range(ny):
            x = _MARGIN_LEFT + i * _CELL
            y = _MARGIN_TOP + (ny - 1 - j) * _CELL
            stroke = ' stroke="black" stroke-width="0.8"' if diagram.flagged[i, j] else ""
            parts.append(
                f'<rect x="{x}" y="{y}" width="{_CELL}" height="{_CELL}" '
                f'fill="{_color(diagram.chern_grid[i, j])}"{stroke}/>'
            )
    # axis ticks at the grid extremes and midpoint, in units of hr
    def ticks(grid):
        idx = [0, len(grid) // 2, len(grid) - 1]
        return [(k, grid[k] / hr) for k in idx]

    for k, val in ticks(diagram.x_grid):
        x = _MARGIN_LEFT + k * _CELL + _CELL / 2
        y = _MARGIN_TOP + ny * _CELL + 16
        parts.append(f'<text x="{x}" y="{y}" font-size="11" text-anchor="middle">{val:.4g}</text>')
    for k, val in ticks(diagram.y_grid):
        x = _MARGIN_LEFT - 6
        y = _MARGIN_TOP + (ny - 1 - k) * _CELL + _CELL / 2 + 4
        parts.append(f'<text x="{x}" y="{y}" font-size="11" text-anchor="end">{val:.4g}</text>')
    parts.append(
        f'<text x="{_MARGIN_LEFT + nx * _CELL / 2}" y="{height - 10}" font-size="12" '
        f'text-anchor="middle">{diagram.x_param} / hr</text>'
    )
    parts.append(
        f'<text x="16" y="{_MARGIN_TOP + ny * _CELL / 2}" font-size="12" text-anchor="middle" '
        f'transform="rotate(-90 16 {_MARGIN_TOP + ny * _CELL / 2})">{diagram.y_param} / hr</text>'
    )
    # legend
    values = sorted({int(v) for v in diagram.chern_grid.ravel()})
    for row, value in enumerate(values):
        x = _MARGIN_LEFT + nx * _CELL + 16
        y = _MARGIN_TOP + row * (_CELL + 6)
        parts.append(f'<rect x="{x}" y="{y}" width="{_CELL}" height="{_CELL}" fill="{_color(value)}"/>')
        parts.append(
            f'<text x="{x + _CELL + 6}" y="{y + _CELL - 3}" font-size="11">Ch = {value}</text>'
        )
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def write_heatmap_svg(diagram: PhaseDiagram, hr: float, path: str | Path) -> None:
    Path(path).write_text(heatmap_svg(diagram, hr))
