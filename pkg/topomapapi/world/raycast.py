"""Simulated 2D LiDAR using exact DDA cell stepping"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ..exceptions import ObstacleError
from .geometry import Pose2
from .grid import CellState, OccupancyGrid

NO_RETURN = math.inf
MIN_RANGE = 1e-6


@dataclass(eq=False)
class LaserScan:
    """Ranges per beam, beam angles in the sensor frame. NO_RETURN marks a
    beam that hit nothing within max_range.
    """

    angles: np.ndarray
    ranges: np.ndarray
    max_range: float

    def __post_init__(self):
        self.angles = np.asarray(self.angles, dtype=float)
        self.ranges = np.asarray(self.ranges, dtype=float)
        if self.angles.shape != self.ranges.shape:
            raise ValueError("angles and ranges differ in length")

    @classmethod
    def uniform(cls, ranges, max_range: float) -> LaserScan:
        ranges = np.asarray(ranges, dtype=float)
        return cls(beam_angles(len(ranges)), ranges, max_range)

    def __eq__(self, other):
        if not isinstance(other, LaserScan):
            return NotImplemented
        return (
            self.max_range == other.max_range
            and np.array_equal(self.angles, other.angles)
            and np.array_equal(self.ranges, other.ranges)
        )

    def __len__(self):
        return len(self.ranges)

    @property
    def valid(self) -> np.ndarray:
        return np.isfinite(self.ranges)

    def points(self) -> np.ndarray:
        """Sensor-frame hit points of the beams that returned"""
        mask = self.valid
        r, a = self.ranges[mask], self.angles[mask]
        return np.column_stack((r * np.cos(a), r * np.sin(a)))


def beam_angles(n_beams: int) -> np.ndarray:
    return 2.0 * math.pi * np.arange(n_beams) / n_beams


@dataclass
class RayTrace:
    ranges: np.ndarray
    hit_rows: np.ndarray
    hit_cols: np.ndarray
    visited_rows: np.ndarray = None
    visited_cols: np.ndarray = None
    visited_rays: np.ndarray = None
    visited_entry: np.ndarray = None


def trace_rays(blocked, resolution, origin, start, angles, limits, record=False) -> RayTrace:
    """March every ray from start cell to cell until it enters a blocked cell
    (or leaves the grid) or its next cell starts beyond its limit.

    ranges hold the entry distance of the blocking cell, inf when none was
    reached. With record=True every entered cell, the start cell included, is
    returned with its entry distance.
    """
    height, width = blocked.shape
    angles = np.asarray(angles, dtype=float)
    n = len(angles)
    limits = np.broadcast_to(np.asarray(limits, dtype=float), (n,))
    px = (start[0] - origin[0]) / resolution
    py = (start[1] - origin[1]) / resolution
    col = np.full(n, math.floor(px), dtype=np.int64)
    row = np.full(n, math.floor(py), dtype=np.int64)
    dx, dy = np.cos(angles), np.sin(angles)
    step_c = np.where(dx > 0, 1, -1)
    step_r = np.where(dy > 0, 1, -1)
    with np.errstate(divide="ignore", invalid="ignore"):
        delta_x = np.where(dx != 0, resolution / np.abs(dx), np.inf)
        delta_y = np.where(dy != 0, resolution / np.abs(dy), np.inf)
        frac_x = np.where(dx > 0, col + 1 - px, px - col)
        frac_y = np.where(dy > 0, row + 1 - py, py - row)
        t_x = np.where(dx != 0, frac_x * delta_x, np.inf)
        t_y = np.where(dy != 0, frac_y * delta_y, np.inf)

    ranges = np.full(n, np.inf)
    hit_rows = np.full(n, -1, dtype=np.int64)
    hit_cols = np.full(n, -1, dtype=np.int64)
    trail = []
    if record:
        trail.append((row.copy(), col.copy(), np.arange(n), np.zeros(n)))

    active = np.ones(n, dtype=bool)
    while active.any():
        idx = np.nonzero(active)[0]
        go_x = t_x[idx] <= t_y[idx]
        entry = np.where(go_x, t_x[idx], t_y[idx])
        beyond = entry > limits[idx]
        active[idx[beyond]] = False
        keep = ~beyond
        idx, go_x, entry = idx[keep], go_x[keep], entry[keep]
        if idx.size == 0:
            break
        col[idx] += np.where(go_x, step_c[idx], 0)
        row[idx] += np.where(go_x, 0, step_r[idx])
        t_x[idx] += np.where(go_x, delta_x[idx], 0.0)
        t_y[idx] += np.where(go_x, 0.0, delta_y[idx])

        r, c = row[idx], col[idx]
        inside = (r >= 0) & (r < height) & (c >= 0) & (c < width)
        hit = ~inside
        hit[inside] = blocked[r[inside], c[inside]]
        hit_idx = idx[hit]
        ranges[hit_idx] = entry[hit]
        hit_rows[hit_idx] = np.where(inside[hit], r[hit], -1)
        hit_cols[hit_idx] = np.where(inside[hit], c[hit], -1)
        active[hit_idx] = False
        if record:
            through = inside
            trail.append((r[through], c[through], idx[through], entry[through]))

    trace = RayTrace(ranges, hit_rows, hit_cols)
    if record:
        trace.visited_rows = np.concatenate([t[0] for t in trail])
        trace.visited_cols = np.concatenate([t[1] for t in trail])
        trace.visited_rays = np.concatenate([t[2] for t in trail])
        trace.visited_entry = np.concatenate([t[3] for t in trail])
    return trace


def _require_free(grid: OccupancyGrid, x, y):
    if grid.state_at(x, y) != CellState.FREE:
        raise ObstacleError(f"pose inside obstacle at ({x:.3f}, {y:.3f})")


def raycast_scan(world, pose: Pose2, n_beams: int = 360, max_range: float = 7.0,
                 noise_std: float = 0.0, rng=None) -> LaserScan:
    """Beam i points at pose.theta + 2*pi*i/n_beams and returns the distance to
    the first occupied cell boundary, or NO_RETURN beyond max_range.
    """
    if n_beams < 4:
        raise ValueError("need at least 4 beams")
    if not max_range > 0:
        raise ValueError("max_range must be positive")
    grid = world.truth
    _require_free(grid, pose.x, pose.y)
    angles = beam_angles(n_beams)
    trace = trace_rays(
        grid.occupied_mask, grid.resolution, grid.origin.position, pose.position,
        pose.theta + angles, max_range)
    ranges = trace.ranges
    if noise_std > 0:
        rng = rng if rng is not None else np.random.default_rng()
        hits = np.isfinite(ranges)
        ranges = ranges.copy()
        ranges[hits] += rng.normal(0.0, noise_std, int(hits.sum()))
        ranges[hits] = np.clip(ranges[hits], MIN_RANGE, max_range)
    else:
        ranges = np.where(np.isfinite(ranges), np.maximum(ranges, MIN_RANGE), NO_RETURN)
    return LaserScan(angles, ranges, float(max_range))
