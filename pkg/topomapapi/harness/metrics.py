"""Evaluation metrics, grid-map storage baselines and report records"""
from __future__ import annotations

import math
import struct
from dataclasses import dataclass, field

import numpy as np

from ..world.geometry import Transform2, wrap_angle
from ..world.grid import OccupancyGrid
from ..world.gridsearch import astar, path_length, shorten_path

SUCCESS_TRANSLATION = 1.0
SUCCESS_DEGREES = 5.0
ABSOLUTE_BELOW = 1e-6


def translation_error(t_final: Transform2, t_gt: Transform2) -> float:
    return math.hypot(t_final.x - t_gt.x, t_final.y - t_gt.y)


def angle_error_degrees(t_final: Transform2, t_gt: Transform2) -> float:
    return abs(math.degrees(wrap_angle(t_final.theta - t_gt.theta)))


def is_relative(t_gt: Transform2) -> bool:
    """eps_t is a ratio only when the true offset is not (almost) zero"""
    return math.hypot(t_gt.x, t_gt.y) >= ABSOLUTE_BELOW


def metric_reloc_errors(t_final: Transform2, t_gt: Transform2) -> tuple[float, float]:
    """(translation error over |t_gt|, angular error in degrees). With a zero
    true offset the translation error is returned as is; see is_relative.
    """
    error = translation_error(t_final, t_gt)
    if is_relative(t_gt):
        error /= math.hypot(t_gt.x, t_gt.y)
    return error, angle_error_degrees(t_final, t_gt)


def metric_success(t_final: Transform2, t_gt: Transform2) -> bool:
    return (translation_error(t_final, t_gt) < SUCCESS_TRANSLATION
            and angle_error_degrees(t_final, t_gt) < SUCCESS_DEGREES)


def metric_c_path(s_topo: float, s_grid: float) -> float:
    if not s_grid > 0:
        raise ValueError("grid path length must be positive")
    return s_topo / s_grid


def grid_baseline_length(explored: OccupancyGrid, a, b):
    """A* over free cells with the octile metric, shortened by line of sight.
    None when b cannot be reached.
    """
    cells = astar(explored.free_mask, explored.cell_of(*a), explored.cell_of(*b),
                  explored.resolution)
    if cells is None:
        return None
    points = [tuple(a)] + [explored.center_of(r, c) for r, c in cells[1:-1]] + [tuple(b)]
    return path_length(shorten_path(explored, points, 0.0))


_HEADER = struct.Struct("<IIf")


def encode_rle(grid: OccupancyGrid) -> bytes:
    """Header (width, height, resolution) then one (state byte, varint run
    length) pair per run of equal cells in row-major order.
    """
    flat = grid.cells.ravel()
    starts = np.concatenate(([0], np.nonzero(np.diff(flat))[0] + 1))
    lengths = np.diff(np.concatenate((starts, [flat.size])))
    out = bytearray(_HEADER.pack(grid.width, grid.height, grid.resolution))
    for state, length in zip(flat[starts], lengths):
        out.append(int(state))
        length = int(length)
        while True:
            byte = length & 0x7F
            length >>= 7
            if length:
                out.append(byte | 0x80)
            else:
                out.append(byte)
                break
    return bytes(out)


def rle_bytes(grid: OccupancyGrid) -> int:
    return len(encode_rle(grid))


def dense_bytes(grid: OccupancyGrid) -> int:
    """One byte per cell plus the same header as the run-length encoding"""
    return _HEADER.size + grid.width * grid.height


def summarize(values) -> dict:
    values = [v for v in values if v is not None and math.isfinite(v)]
    if not values:
        return {"mean": None, "std": None, "max": None, "n": 0}
    array = np.asarray(values, dtype=float)
    return {"mean": float(array.mean()), "std": float(array.std()),
            "max": float(array.max()), "n": len(values)}


def json_safe(value):
    """Non-finite floats become None so reports stay strict JSON"""
    if isinstance(value, float) and not math.isfinite(value):
        return None
    if isinstance(value, dict):
        return {key: json_safe(item) for key, item in value.items()}
    if isinstance(value, (list, tuple)):
        return [json_safe(item) for item in value]
    return value


@dataclass
class MetricsReport:
    """Results of one map mode on one world.

    eps_t and eps_theta summarize converged trials only. l_reloca and the
    success rate cover every trial that ran; a trial that never converged
    counts the whole walk and as a failure.
    """

    mode: str
    storage_bytes: int
    counts: dict
    reloc_rows: list = field(default_factory=list)
    plan_rows: list = field(default_factory=list)

    @property
    def ok_reloc_rows(self) -> list:
        return [r for r in self.reloc_rows if not r.get("failed")]

    @property
    def ok_plan_rows(self) -> list:
        return [r for r in self.plan_rows if not r.get("failed") and r.get("c_path") is not None]

    @property
    def blocked_routes(self) -> int:
        return sum(1 for r in self.plan_rows if r.get("reached") is False)

    @property
    def failed(self) -> int:
        return sum(1 for r in self.reloc_rows + self.plan_rows if r.get("failed"))

    @property
    def success_rate(self):
        rows = self.ok_reloc_rows
        if not rows:
            return None
        return sum(1 for r in rows if r["success"]) / len(rows)

    def converged_rows(self) -> list:
        return [r for r in self.ok_reloc_rows if r["converged"]]

    def as_dict(self) -> dict:
        converged = self.converged_rows()
        return {
            "mode": self.mode,
            "storage_bytes": self.storage_bytes,
            "counts": self.counts,
            "success_rate": self.success_rate,
            "l_reloca": summarize(r["l_reloca"] for r in self.ok_reloc_rows),
            "eps_t": summarize(r["eps_t"] for r in converged),
            "eps_theta": summarize(r["eps_theta"] for r in converged),
            "c_path": summarize(r["c_path"] for r in self.ok_plan_rows),
            "failed_trials": self.failed,
            "blocked_routes": self.blocked_routes,
            "reloc_trials": self.reloc_rows,
            "plan_pairs": self.plan_rows,
        }
