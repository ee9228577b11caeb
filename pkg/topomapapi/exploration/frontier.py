"""Frontier detection and next-best-view utility"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import ndimage

from ..world.geometry import Pose2
from ..world.grid import OccupancyGrid
from ..world.gridsearch import distance_field, navigable_mask
from ..world.mapping import inflation_cells

EIGHT_CONNECTED = np.ones((3, 3), dtype=bool)


@dataclass(eq=False)
class Frontier:
    """One 8-connected cluster of free cells bordering unknown space.

    cells is an (n, 2) array of (row, col); centroid is in map coordinates.
    """

    cells: np.ndarray
    centroid: tuple[float, float]
    info_gain: int
    centroid_cell: tuple[float, float]

    def __len__(self):
        return len(self.cells)


def frontier_cells_mask(explored: OccupancyGrid) -> np.ndarray:
    """Free cells with at least one 4-adjacent unknown cell"""
    unknown = explored.unknown_mask
    touching = np.zeros_like(unknown)
    touching[1:, :] |= unknown[:-1, :]
    touching[:-1, :] |= unknown[1:, :]
    touching[:, 1:] |= unknown[:, :-1]
    touching[:, :-1] |= unknown[:, 1:]
    return explored.free_mask & touching


def unknown_within(explored: OccupancyGrid, center, radius: float) -> int:
    res = explored.resolution
    row, col = explored.cell_of(*center)
    span = int(math.ceil(radius / res))
    r0, r1 = max(row - span, 0), min(row + span + 1, explored.height)
    c0, c1 = max(col - span, 0), min(col + span + 1, explored.width)
    if r0 >= r1 or c0 >= c1:
        return 0
    rows, cols = np.mgrid[r0:r1, c0:c1]
    centers = explored.centers_of(rows.ravel(), cols.ravel())
    inside = np.hypot(centers[:, 0] - center[0], centers[:, 1] - center[1]) <= radius
    return int(np.count_nonzero(explored.unknown_mask[r0:r1, c0:c1].ravel() & inside))


def detect_frontiers(explored: OccupancyGrid, min_cells: int = 3,
                     r_info: float = 7.0) -> list[Frontier]:
    """Frontier clusters ordered by centroid cell (row, then column). Clusters
    smaller than min_cells are dropped.
    """
    labels, count = ndimage.label(frontier_cells_mask(explored), structure=EIGHT_CONNECTED)
    if count == 0:
        return []
    rows, cols = np.nonzero(labels)
    ids = labels[rows, cols]
    order = np.argsort(ids, kind="stable")
    rows, cols, ids = rows[order], cols[order], ids[order]
    bounds = np.searchsorted(ids, np.arange(1, count + 2))

    frontiers = []
    for k in range(count):
        lo, hi = bounds[k], bounds[k + 1]
        if hi - lo < min_cells:
            continue
        cells = np.column_stack((rows[lo:hi], cols[lo:hi]))
        centroid_cell = (float(cells[:, 0].mean()), float(cells[:, 1].mean()))
        centroid = (
            explored.origin.x + (centroid_cell[1] + 0.5) * explored.resolution,
            explored.origin.y + (centroid_cell[0] + 0.5) * explored.resolution,
        )
        frontiers.append(Frontier(cells, centroid, unknown_within(explored, centroid, r_info),
                                  centroid_cell))
    frontiers.sort(key=lambda f: f.centroid_cell)
    return frontiers


def frontier_goal(frontier: Frontier, explored: OccupancyGrid, field: np.ndarray,
                  clearance: float):
    """Reachable cell next to the frontier with the smallest path distance.

    Returns ((row, col), distance) or None when no such cell is reachable.
    """
    reach = inflation_cells(explored.resolution, clearance) + 2
    r0 = max(int(frontier.cells[:, 0].min()) - reach, 0)
    r1 = min(int(frontier.cells[:, 0].max()) + reach + 1, explored.height)
    c0 = max(int(frontier.cells[:, 1].min()) - reach, 0)
    c1 = min(int(frontier.cells[:, 1].max()) + reach + 1, explored.width)
    near = np.zeros((r1 - r0, c1 - c0), dtype=bool)
    near[frontier.cells[:, 0] - r0, frontier.cells[:, 1] - c0] = True
    near = ndimage.binary_dilation(near, structure=EIGHT_CONNECTED, iterations=reach)
    costs = np.where(near, field[r0:r1, c0:c1], np.inf)
    best = int(np.argmin(costs))
    cost = float(costs.ravel()[best])
    if not math.isfinite(cost):
        return None
    row, col = divmod(best, c1 - c0)
    return (row + r0, col + c0), cost


def reach_field(explored: OccupancyGrid, pose: Pose2, clearance: float):
    mask = navigable_mask(explored, clearance, pose.position)
    return distance_field(mask, explored.resolution, explored.cell_of(pose.x, pose.y))


def frontier_utility(frontier: Frontier, pose: Pose2, explored: OccupancyGrid,
                     clearance: float | None = None, field: np.ndarray | None = None) -> float:
    """info gain divided by the path cost to reach the frontier; 0 when it
    cannot be reached. The cost is floored at one cell.
    """
    clearance = explored.resolution if clearance is None else clearance
    if field is None:
        field, _ = reach_field(explored, pose, clearance)
    goal = frontier_goal(frontier, explored, field, clearance)
    if goal is None:
        return 0.0
    return frontier.info_gain / max(goal[1], explored.resolution)


def still_frontier(explored: OccupancyGrid, frontier: Frontier) -> bool:
    mask = frontier_cells_mask(explored)
    return bool(mask[frontier.cells[:, 0], frontier.cells[:, 1]].any())
