"""Seeded random walks and hidden odometry offsets for trials"""
from __future__ import annotations

import math

import numpy as np

from ..world.geometry import Pose2, Transform2
from ..world.gridsearch import grid_path, path_length
from ..world.mapping import traversable_mask
from ..world.motion import move_along


def random_cell(grid, rng: np.random.Generator, clearance: float):
    """Centre of a uniformly drawn traversable cell"""
    rows, cols = np.nonzero(traversable_mask(grid, clearance))
    if rows.size == 0:
        raise ValueError("grid has no traversable cell")
    pick = int(rng.integers(rows.size))
    return grid.center_of(int(rows[pick]), int(cols[pick]))


def random_start(world, rng: np.random.Generator, clearance: float | None = None) -> Pose2:
    clearance = world.resolution if clearance is None else clearance
    x, y = random_cell(world.truth, rng, clearance)
    return Pose2(x, y, rng.uniform(-math.pi, math.pi))


def random_offset(rng: np.random.Generator, extent: float = 5.0) -> Transform2:
    """Hidden map<-odom transform: x, y uniform in [-extent, extent], any heading"""
    return Transform2(rng.uniform(-extent, extent), rng.uniform(-extent, extent),
                      rng.uniform(-math.pi, math.pi))


def random_walk(world, start: Pose2, length: float, rng: np.random.Generator,
                step: float = 0.25, clearance: float | None = None,
                max_legs: int = 200) -> list[Pose2]:
    """Poses along repeated shortest paths to uniformly drawn free cells until
    at least `length` meters have been covered.
    """
    clearance = world.resolution if clearance is None else clearance
    truth = world.truth
    poses = [start]
    walked = 0.0
    for _ in range(max_legs):
        if walked >= length:
            break
        here = poses[-1].position
        path = grid_path(truth, here, random_cell(truth, rng, clearance), clearance)
        if path is None or len(path) < 2:
            continue
        leg = move_along(world, path, step)[1:]
        poses.extend(leg)
        walked += path_length(path)
    return poses
