"""Pictures of a map over its explored grid.

Text renders use ``#`` occupied, ``.`` free and a blank for unknown cells;
rectangle outlines are ``+``, edges ``o``, the trajectory ``*``, support
nodes ``s`` and main nodes ``M``. Image renders (.png, .ppm, .pbm) draw the
same layers in colour through Pillow.
"""
from __future__ import annotations

import logging
import math
from pathlib import Path
from typing import Optional

import numpy as np
from PIL import Image

from ..fht.graph import FhtMap
from ..fht.node import NodeKind
from ..world.geometry import Pose2
from ..world.grid import CellState, OccupancyGrid

logger = logging.getLogger(__name__)

IMAGE_SUFFIXES = (".png", ".ppm", ".pbm")

GRID_CHARS = {CellState.FREE: ".", CellState.OCCUPIED: "#", CellState.UNKNOWN: " "}

COLOURS = {
    " ": (205, 205, 205),
    ".": (255, 255, 255),
    "#": (0, 0, 0),
    "+": (120, 170, 230),
    "o": (40, 150, 40),
    "*": (250, 160, 0),
    "s": (30, 60, 220),
    "M": (220, 30, 30),
}


def _canvas_grid(fht_map: FhtMap, explored: Optional[OccupancyGrid]) -> OccupancyGrid:
    if explored is not None:
        return explored
    # no grid: an all-unknown canvas covering every rectangle
    res = fht_map.meta.resolution
    if fht_map.is_empty:
        return OccupancyGrid(1, 1, res)
    rects = np.array([n.free_rect.as_list() for n in fht_map.nodes])
    xmax, ymax = rects[:, 2].max(), rects[:, 3].max()
    origin = Pose2(float(min(rects[:, 0].min(), 0.0)), float(min(rects[:, 1].min(), 0.0)), 0.0)
    width = max(1, math.ceil((xmax - origin.x) / res) + 1)
    height = max(1, math.ceil((ymax - origin.y) / res) + 1)
    return OccupancyGrid(width, height, res, origin)


def _put(canvas, grid: OccupancyGrid, point, char):
    row, col = grid.cell_of(*point)
    if grid.in_bounds(row, col):
        canvas[row, col] = char


def _draw_segment(canvas, grid: OccupancyGrid, a, b, char):
    steps = max(2, int(math.dist(a, b) / (grid.resolution / 2.0)) + 1)
    for t in np.linspace(0.0, 1.0, steps):
        _put(canvas, grid, (a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1])), char)


def render_layers(fht_map: FhtMap, explored: Optional[OccupancyGrid] = None,
                  trajectory=()) -> np.ndarray:
    """Character canvas with grid row 0 first"""
    grid = _canvas_grid(fht_map, explored)
    lookup = np.array([GRID_CHARS[CellState(i)] for i in range(3)])
    canvas = lookup[grid.cells].astype("<U1")

    for node in fht_map.nodes:
        r = node.free_rect
        corners = [(r.xmin, r.ymin), (r.xmax, r.ymin), (r.xmax, r.ymax), (r.xmin, r.ymax)]
        for a, b in zip(corners, corners[1:] + corners[:1]):
            _draw_segment(canvas, grid, a, b, "+")
    for a, b in fht_map.sorted_edges():
        _draw_segment(canvas, grid, fht_map.node(a).position, fht_map.node(b).position, "o")
    for pose in trajectory:
        position = pose.position if hasattr(pose, "position") else pose
        _put(canvas, grid, position, "*")
    for kind, char in ((NodeKind.SUPPORT, "s"), (NodeKind.MAIN, "M")):
        for node in fht_map.nodes:
            if node.kind is kind:
                _put(canvas, grid, node.position, char)
    return canvas


def render_text(fht_map: FhtMap, explored: Optional[OccupancyGrid] = None,
                trajectory=()) -> str:
    canvas = render_layers(fht_map, explored, trajectory)
    # highest y on top
    lines = ["".join(row).rstrip() for row in canvas[::-1]]
    counts = fht_map.counts()
    lines.append("")
    lines.append("# occupied   . free   + free rectangle   o edge   * trajectory")
    lines.append(f"M main nodes: {counts['main']}   s support nodes: {counts['support']}"
                 f"   edges: {counts['edges']}")
    return "\n".join(lines) + "\n"


def render_image(fht_map: FhtMap, explored: Optional[OccupancyGrid] = None,
                 trajectory=()) -> Image.Image:
    canvas = render_layers(fht_map, explored, trajectory)[::-1]
    pixels = np.zeros(canvas.shape + (3,), dtype=np.uint8)
    for char, colour in COLOURS.items():
        pixels[canvas == char] = colour
    return Image.fromarray(pixels)


def export_render(fht_map: FhtMap, explored: Optional[OccupancyGrid] = None, trajectory=(),
                  path=None) -> str:
    """Text render, written to path when given. Image suffixes write a picture
    instead; the text render is returned either way.
    """
    text = render_text(fht_map, explored, trajectory)
    if path is None:
        return text
    path = Path(path)
    suffix = path.suffix.lower()
    if suffix in IMAGE_SUFFIXES:
        image = render_image(fht_map, explored, trajectory)
        if suffix == ".pbm":
            image = image.convert("1")
        image.save(path)
    else:
        path.write_text(text)
    logger.debug("render written to %s", path)
    return text
