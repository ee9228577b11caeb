"""Occupancy grids shared by the simulated world and the explored map"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import IntEnum

import numpy as np

from .geometry import Pose2


class CellState(IntEnum):
    FREE = 0
    OCCUPIED = 1
    UNKNOWN = 2


@dataclass(eq=False)
class OccupancyGrid:
    """Dense row-major grid. Row r, column c covers
    [origin.x + c * resolution, origin.x + (c + 1) * resolution) in x and the
    matching interval in y.
    """

    width: int
    height: int
    resolution: float
    origin: Pose2 = field(default_factory=lambda: Pose2(0.0, 0.0, 0.0))
    cells: np.ndarray = None

    def __post_init__(self):
        if self.width < 1 or self.height < 1:
            raise ValueError("grid needs at least one cell")
        if not self.resolution > 0:
            raise ValueError("resolution must be positive")
        if self.cells is None:
            self.cells = np.full((self.height, self.width), CellState.UNKNOWN, dtype=np.int8)
        else:
            self.cells = np.asarray(self.cells, dtype=np.int8)
        if self.cells.shape != (self.height, self.width):
            raise ValueError(
                f"cells shape {self.cells.shape} does not match {self.height}x{self.width}")
        if not np.isin(self.cells, (CellState.FREE, CellState.OCCUPIED, CellState.UNKNOWN)).all():
            raise ValueError("cells must hold FREE, OCCUPIED or UNKNOWN")

    @classmethod
    def unknown_like(cls, other: OccupancyGrid) -> OccupancyGrid:
        return cls(other.width, other.height, other.resolution, other.origin)

    def copy(self) -> OccupancyGrid:
        return OccupancyGrid(self.width, self.height, self.resolution, self.origin, self.cells.copy())

    def __eq__(self, other):
        if not isinstance(other, OccupancyGrid):
            return NotImplemented
        return (
            self.width == other.width
            and self.height == other.height
            and self.resolution == other.resolution
            and self.origin == other.origin
            and np.array_equal(self.cells, other.cells)
        )

    @property
    def shape(self) -> tuple[int, int]:
        return (self.height, self.width)

    def cell_of(self, x: float, y: float) -> tuple[int, int]:
        """(row, col) of the cell containing a map-frame point"""
        col = math.floor((x - self.origin.x) / self.resolution)
        row = math.floor((y - self.origin.y) / self.resolution)
        return (row, col)

    def center_of(self, row: int, col: int) -> tuple[float, float]:
        return (
            self.origin.x + (col + 0.5) * self.resolution,
            self.origin.y + (row + 0.5) * self.resolution,
        )

    def centers_of(self, rows, cols) -> np.ndarray:
        rows = np.asarray(rows, dtype=float)
        cols = np.asarray(cols, dtype=float)
        return np.column_stack((
            self.origin.x + (cols + 0.5) * self.resolution,
            self.origin.y + (rows + 0.5) * self.resolution,
        ))

    def in_bounds(self, row: int, col: int) -> bool:
        return 0 <= row < self.height and 0 <= col < self.width

    def state_at(self, x: float, y: float) -> CellState:
        """State of the cell containing (x, y); outside the grid counts as OCCUPIED"""
        row, col = self.cell_of(x, y)
        if not self.in_bounds(row, col):
            return CellState.OCCUPIED
        return CellState(int(self.cells[row, col]))

    def is_free(self, x: float, y: float) -> bool:
        return self.state_at(x, y) == CellState.FREE

    @property
    def free_mask(self) -> np.ndarray:
        return self.cells == CellState.FREE

    @property
    def occupied_mask(self) -> np.ndarray:
        return self.cells == CellState.OCCUPIED

    @property
    def unknown_mask(self) -> np.ndarray:
        return self.cells == CellState.UNKNOWN

    def count(self, state: CellState) -> int:
        return int(np.count_nonzero(self.cells == state))

    def free_area(self) -> float:
        return self.count(CellState.FREE) * self.resolution ** 2

    @property
    def extent(self) -> tuple[float, float, float, float]:
        return (
            self.origin.x,
            self.origin.y,
            self.origin.x + self.width * self.resolution,
            self.origin.y + self.height * self.resolution,
        )
