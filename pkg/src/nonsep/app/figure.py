"""SVG pictures of lattice arrangements x + K, x in Λ."""
from __future__ import annotations

import itertools

import numpy as np

from .._numerics import angle_grid, unit
from ..geom2d import Ellipse2D, Polygon2D

WINDOW = 5
_SIZE = 600
_MARGIN = 20


def _outline(body, samples=256):
    if isinstance(body, Polygon2D):
        return body.vertices
    if isinstance(body, Ellipse2D):
        return unit(angle_grid(samples)) @ body.matrix.T
    return body.boundary_points(angle_grid(samples))


def _fmt(v):
    return f"{v:.4f}".rstrip("0").rstrip(".")


def render_svg(body, lattice, caption=None):
    """SVG text for the translates of ``body`` over a 5x5 block of lattice cells.

    The output depends only on the inputs, so equal inputs give equal bytes.
    """
    outline = _outline(body)
    half = WINDOW // 2
    coords = np.array(list(itertools.product(range(-half, half + 1), repeat=2)), dtype=float)
    points = coords @ lattice.basis.T
    shapes = points[:, None, :] + outline[None, :, :]
    lo = shapes.reshape(-1, 2).min(axis=0)
    hi = shapes.reshape(-1, 2).max(axis=0)
    scale = (_SIZE - 2 * _MARGIN) / float((hi - lo).max())

    def to_px(p):
        return (_MARGIN + (p[..., 0] - lo[0]) * scale, _SIZE - _MARGIN - (p[..., 1] - lo[1]) * scale)

    cap = caption or f"translates of K over {WINDOW}x{WINDOW} cells, d(L) = {lattice.det:.6g}"
    lines = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{_SIZE}" height="{_SIZE + 30}" '
        f'viewBox="0 0 {_SIZE} {_SIZE + 30}">',
        f"<title>{cap}</title>",
        f'<desc data-det="{lattice.det:.12g}" data-basis="{lattice.basis.tolist()}">{cap}</desc>',
        '<rect width="100%" height="100%" fill="white"/>',
    ]
    for shape in shapes:
        x, y = to_px(shape)
        pts = " ".join(f"{_fmt(a)},{_fmt(b)}" for a, b in zip(x, y))
        lines.append(f'<polygon points="{pts}" fill="#9ecae1" fill-opacity="0.5" stroke="#08519c" stroke-width="1"/>')
    x, y = to_px(points)
    for a, b in zip(x, y):
        lines.append(f'<circle cx="{_fmt(a)}" cy="{_fmt(b)}" r="2.5" fill="#a50f15"/>')
    lines.append(f'<text x="{_MARGIN}" y="{_SIZE + 20}" font-family="sans-serif" font-size="13">{cap}</text>')
    lines.append("</svg>")
    return "\n".join(lines) + "\n"


def emit_figure(body, lattice, path, caption=None):
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(render_svg(body, lattice, caption))
