"""Explored-grid mapping and free-space queries"""
from __future__ import annotations

import math

import numpy as np
from scipy import ndimage

from .geometry import Pose2
from .grid import CellState, OccupancyGrid
from .raycast import LaserScan, trace_rays

_TOUCH = 1e-9


def integrate_scan(explored: OccupancyGrid, pose: Pose2, scan: LaserScan) -> OccupancyGrid:
    """Return a new grid with the scan carved in: cells a beam crosses before
    its hit become FREE, the hit cell becomes OCCUPIED, beams without a return
    free everything up to max_range. OCCUPIED cells are never freed.
    """
    valid = scan.valid
    limits = np.where(valid, scan.ranges, scan.max_range)
    trace = trace_rays(
        np.zeros(explored.shape, dtype=bool), explored.resolution, explored.origin.position,
        pose.position, pose.theta + scan.angles, limits + _TOUCH, record=True)

    rays = trace.visited_rays
    entry = trace.visited_entry
    ray_limit = limits[rays]
    before = entry < ray_limit - _TOUCH
    at_hit = valid[rays] & (np.abs(entry - ray_limit) <= _TOUCH)

    cells = explored.cells.copy()
    free_rows, free_cols = trace.visited_rows[before], trace.visited_cols[before]
    not_occupied = cells[free_rows, free_cols] != CellState.OCCUPIED
    cells[free_rows[not_occupied], free_cols[not_occupied]] = CellState.FREE
    cells[trace.visited_rows[at_hit], trace.visited_cols[at_hit]] = CellState.OCCUPIED
    return OccupancyGrid(explored.width, explored.height, explored.resolution, explored.origin, cells)


def _point_box_distance(px, py, x0, y0, x1, y1):
    dx = np.maximum(np.maximum(x0 - px, 0.0), px - x1)
    dy = np.maximum(np.maximum(y0 - py, 0.0), py - y1)
    return np.hypot(dx, dy)


def _point_segment_distance(px, py, ax, ay, bx, by):
    vx, vy = bx - ax, by - ay
    length_sq = vx * vx + vy * vy
    if length_sq == 0.0:
        return np.hypot(px - ax, py - ay)
    t = np.clip(((px - ax) * vx + (py - ay) * vy) / length_sq, 0.0, 1.0)
    return np.hypot(px - (ax + t * vx), py - (ay + t * vy))


def _segment_crosses_boxes(ax, ay, bx, by, x0, y0, x1, y1):
    """Liang-Barsky clip of segment ab against each box"""
    dx, dy = bx - ax, by - ay
    t_low = np.zeros(x0.shape)
    t_high = np.ones(x0.shape)
    rejected = np.zeros(x0.shape, dtype=bool)
    for p, q in ((-dx, ax - x0), (dx, x1 - ax), (-dy, ay - y0), (dy, y1 - ay)):
        if p == 0.0:
            rejected |= q < 0.0
            continue
        ratio = q / p
        if p < 0.0:
            t_low = np.maximum(t_low, ratio)
        else:
            t_high = np.minimum(t_high, ratio)
    return ~rejected & (t_low <= t_high)


def segment_in_free(grid: OccupancyGrid, a, b, clearance: float = 0.0) -> bool:
    """True iff every cell whose square lies within clearance of segment ab is
    FREE. Unknown cells and cells beyond the grid count as blocked.
    """
    ax, ay = float(a[0]), float(a[1])
    bx, by = float(b[0]), float(b[1])
    reach = clearance + _TOUCH
    res = grid.resolution
    ox, oy = grid.origin.x, grid.origin.y
    col0 = math.floor((min(ax, bx) - reach - ox) / res)
    col1 = math.floor((max(ax, bx) + reach - ox) / res)
    row0 = math.floor((min(ay, by) - reach - oy) / res)
    row1 = math.floor((max(ay, by) + reach - oy) / res)

    # cells beyond the border only matter when they are actually within reach
    inner = grid.cells[max(row0, 0):min(row1, grid.height - 1) + 1,
                       max(col0, 0):min(col1, grid.width - 1) + 1]
    outside = col0 < 0 or row0 < 0 or col1 >= grid.width or row1 >= grid.height
    if not outside and inner.size and (inner == CellState.FREE).all():
        return True

    rows, cols = np.mgrid[row0:row1 + 1, col0:col1 + 1]
    rows, cols = rows.ravel(), cols.ravel()
    in_grid = (rows >= 0) & (rows < grid.height) & (cols >= 0) & (cols < grid.width)
    blocked = ~in_grid
    blocked[in_grid] = grid.cells[rows[in_grid], cols[in_grid]] != CellState.FREE
    rows, cols = rows[blocked], cols[blocked]
    if rows.size == 0:
        return True

    x0 = ox + cols * res
    y0 = oy + rows * res
    x1, y1 = x0 + res, y0 + res
    distance = np.minimum(_point_box_distance(ax, ay, x0, y0, x1, y1),
                          _point_box_distance(bx, by, x0, y0, x1, y1))
    for cx, cy in ((x0, y0), (x0, y1), (x1, y0), (x1, y1)):
        distance = np.minimum(distance, _point_segment_distance(cx, cy, ax, ay, bx, by))
    distance[_segment_crosses_boxes(ax, ay, bx, by, x0, y0, x1, y1)] = 0.0
    return not bool((distance <= reach).any())


def inflation_cells(resolution: float, clearance: float) -> int:
    return int(math.ceil(clearance / resolution - 1e-9)) + 1


def traversable_mask(grid: OccupancyGrid, clearance: float) -> np.ndarray:
    """FREE cells whose whole neighborhood of inflation_cells is FREE"""
    radius = inflation_cells(grid.resolution, clearance)
    structure = np.ones((2 * radius + 1, 2 * radius + 1), dtype=bool)
    return ndimage.binary_erosion(grid.free_mask, structure=structure, border_value=0)
