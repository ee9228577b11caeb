"""World files: ground-truth grids with wall textures.

Format::

    world <width> <height> <resolution_m>
    <height rows of exactly <width> characters>

``.`` is free, ``#`` is occupied with texture 0.5 and a digit ``d`` is
occupied with texture d/9. The first row listed is grid row 0 (lowest y).
Explored grids use the same layout with a ``grid`` header and ``?`` for
unknown cells.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass
from pathlib import Path

import numpy as np
from django.conf import settings

from ..exceptions import WorldParseError
from .grid import CellState, OccupancyGrid

logger = logging.getLogger(__name__)

DEFAULT_TEXTURE = 0.5


@dataclass(eq=False)
class World:
    truth: OccupancyGrid
    texture: np.ndarray
    name: str = "world"

    def __post_init__(self):
        if self.truth.count(CellState.UNKNOWN):
            raise ValueError("a ground-truth world cannot hold unknown cells")
        occupied = self.truth.occupied_mask
        if np.isnan(self.texture[occupied]).any():
            raise ValueError("every occupied cell needs a texture")

    def __eq__(self, other):
        if not isinstance(other, World):
            return NotImplemented
        return self.truth == other.truth and np.array_equal(
            self.texture, other.texture, equal_nan=True)

    @property
    def resolution(self) -> float:
        return self.truth.resolution


def _parse_header(line, keyword):
    parts = line.split()
    if not parts or parts[0] != keyword:
        raise WorldParseError(f"missing '{keyword} <width> <height> <resolution>' header", 1, 1)
    if len(parts) != 4:
        raise WorldParseError("header needs width, height and resolution", 1)
    try:
        width, height = int(parts[1]), int(parts[2])
        resolution = float(parts[3])
    except ValueError as ex:
        raise WorldParseError(f"bad header value: {ex}", 1) from ex
    if width < 1 or height < 1 or not resolution > 0:
        raise WorldParseError("width, height and resolution must be positive", 1)
    return width, height, resolution


def _rows(text, keyword):
    lines = text.splitlines()
    while lines and not lines[-1].strip():
        lines.pop()
    if not lines:
        raise WorldParseError(f"missing '{keyword}' header", 1, 1)
    width, height, resolution = _parse_header(lines[0], keyword)
    body = lines[1:]
    if len(body) != height:
        raise WorldParseError(f"expected {height} rows, found {len(body)}", len(lines) + 1)
    for index, row in enumerate(body):
        if len(row) != width:
            raise WorldParseError(
                f"row has {len(row)} characters, expected {width}", index + 2,
                min(len(row), width) + 1)
    return width, height, resolution, body


def load_world(text: str, name: str = "world") -> World:
    width, height, resolution, body = _rows(text, "world")
    cells = np.zeros((height, width), dtype=np.int8)
    texture = np.full((height, width), np.nan)
    for row, line in enumerate(body):
        for col, char in enumerate(line):
            if char == ".":
                continue
            if char == "#":
                value = DEFAULT_TEXTURE
            elif char.isdigit():
                value = int(char) / 9.0
            else:
                raise WorldParseError(f"unknown character {char!r}", row + 2, col + 1)
            cells[row, col] = CellState.OCCUPIED
            texture[row, col] = value
    grid = OccupancyGrid(width, height, resolution, cells=cells)
    return World(grid, texture, name)


def _texture_char(value):
    if value == DEFAULT_TEXTURE:
        return "#"
    digit = int(round(value * 9.0))
    if not 0 <= digit <= 9 or digit / 9.0 != value:
        raise ValueError(f"texture {value} has no file representation")
    return str(digit)


def save_world(world: World) -> str:
    grid = world.truth
    lines = [f"world {grid.width} {grid.height} {grid.resolution!r}"]
    for row in range(grid.height):
        chars = []
        for col in range(grid.width):
            if grid.cells[row, col] == CellState.FREE:
                chars.append(".")
            else:
                chars.append(_texture_char(world.texture[row, col]))
        lines.append("".join(chars))
    return "\n".join(lines) + "\n"


_GRID_CHARS = {CellState.FREE: ".", CellState.OCCUPIED: "#", CellState.UNKNOWN: "?"}
_GRID_STATES = {char: state for state, char in _GRID_CHARS.items()}


def save_grid(grid: OccupancyGrid) -> str:
    lines = [f"grid {grid.width} {grid.height} {grid.resolution!r}"]
    lookup = np.array([_GRID_CHARS[CellState(i)] for i in range(3)])
    for row in range(grid.height):
        lines.append("".join(lookup[grid.cells[row]]))
    return "\n".join(lines) + "\n"


def load_grid(text: str) -> OccupancyGrid:
    width, height, resolution, body = _rows(text, "grid")
    cells = np.empty((height, width), dtype=np.int8)
    for row, line in enumerate(body):
        for col, char in enumerate(line):
            if char not in _GRID_STATES:
                raise WorldParseError(f"unknown character {char!r}", row + 2, col + 1)
            cells[row, col] = _GRID_STATES[char]
    return OccupancyGrid(width, height, resolution, cells=cells)


def load_world_file(path) -> World:
    path = Path(path)
    if not path.exists():
        bundled = Path(settings.TOPOMAP["WORLDS_DIR"]) / path.name
        if bundled.exists():
            path = bundled
    logger.debug("loading world %s", path)
    return load_world(path.read_text(), name=path.stem)
