"""Robot motion along polylines"""
from __future__ import annotations

import math

import numpy as np

from ..exceptions import MotionError
from .geometry import Pose2
from .grid import CellState
from .mapping import segment_in_free


def move_along(world, path, step: float) -> list[Pose2]:
    """Sample poses every `step` meters of arc length along path, heading
    tangent to the segment being traveled. The last pose sits at the path end.

    Raises MotionError with the index of the first path point that cannot be
    reached through free space.
    """
    if not step > 0:
        raise ValueError("step must be positive")
    pts = np.asarray(path, dtype=float).reshape(-1, 2)
    if len(pts) == 0:
        raise ValueError("path is empty")
    truth = world.truth
    if truth.state_at(*pts[0]) != CellState.FREE:
        raise MotionError(f"path start ({pts[0][0]:.3f}, {pts[0][1]:.3f}) is not free",
                          index=0, location=tuple(pts[0]))
    for index in range(1, len(pts)):
        if not segment_in_free(truth, pts[index - 1], pts[index], 0.0):
            raise MotionError(
                f"path leaves free space between points {index - 1} and {index}",
                index=index, location=tuple(pts[index]))

    deltas = np.diff(pts, axis=0)
    lengths = np.hypot(deltas[:, 0], deltas[:, 1])
    moving = lengths > 0
    if not moving.any():
        return [Pose2(pts[0][0], pts[0][1], 0.0)]
    starts, deltas, lengths = pts[:-1][moving], deltas[moving], lengths[moving]
    headings = np.arctan2(deltas[:, 1], deltas[:, 0])
    cumulative = np.concatenate(([0.0], np.cumsum(lengths)))
    total = cumulative[-1]

    count = int(math.floor(total / step + 1e-9))
    arc = np.arange(count + 1) * step
    if total - arc[-1] > 1e-9:
        arc = np.append(arc, total)
    arc[-1] = min(arc[-1], total)
    segment = np.clip(np.searchsorted(cumulative, arc, side="right") - 1, 0, len(lengths) - 1)
    along = (arc - cumulative[segment]) / lengths[segment]
    xy = starts[segment] + deltas[segment] * along[:, None]
    xy[-1] = pts[-1]
    return [Pose2(x, y, theta) for (x, y), theta in zip(xy, headings[segment])]
