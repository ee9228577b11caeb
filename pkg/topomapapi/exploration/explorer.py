"""Autonomous frontier exploration.

Each step the robot takes a full 360 degree scan (in the heading-0 frame),
folds it into the explored grid and hands pose, scan and grid to the map
builder callback. Targets are re-selected every ``replan_every`` steps or as
soon as the current target frontier is gone.
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from ..exceptions import ObstacleError
from ..world.geometry import Pose2
from ..world.grid import CellState, OccupancyGrid
from ..world.gridsearch import cells_to_points, path_from_predecessors, shorten_path
from ..world.mapping import integrate_scan
from ..world.motion import move_along
from ..world.raycast import LaserScan, raycast_scan
from .frontier import Frontier, detect_frontiers, frontier_goal, reach_field, still_frontier

logger = logging.getLogger(__name__)

MapBuilderCallback = Callable[[Pose2, LaserScan, OccupancyGrid], None]


@dataclass(frozen=True)
class ExploreConfig:
    budget: int = 4000
    r_info: Optional[float] = None
    replan_every: int = 10
    seed: int = 0
    step: float = 0.25
    n_beams: int = 360
    max_range: float = 7.0
    noise_std: float = 0.0
    clearance: Optional[float] = None
    min_frontier_cells: int = 3
    blacklist_radius: float = 0.5

    @property
    def info_radius(self) -> float:
        return self.max_range if self.r_info is None else self.r_info


@dataclass(eq=False)
class ExploreResult:
    trajectory: list[Pose2]
    explored: OccupancyGrid
    finished: bool
    steps: int = 0
    targets: list[tuple[float, float]] = field(default_factory=list)

    @property
    def partial(self) -> bool:
        """True when the step budget ran out before the frontiers did"""
        return not self.finished

    def __iter__(self):
        yield self.trajectory
        yield self.explored

    def coverage(self, truth: OccupancyGrid) -> float:
        total = truth.count(CellState.FREE)
        if total == 0:
            return 1.0
        return self.explored.count(CellState.FREE) / total


def select_frontier(explored: OccupancyGrid, pose: Pose2, frontiers: list[Frontier],
                    clearance: float, visited=(), blacklist_radius: float = 0.5):
    """Frontier with the highest utility and the cell path to its goal.

    Frontiers come ordered by centroid, and only a strictly better utility
    replaces the current best, so ties go to the lower centroid. Frontiers
    whose goal was already reached are skipped. Returns None when no frontier
    has positive utility.
    """
    res = explored.resolution
    field_, predecessors = reach_field(explored, pose, clearance)
    source = explored.cell_of(pose.x, pose.y)
    best, best_utility = None, 0.0
    for frontier in frontiers:
        goal = frontier_goal(frontier, explored, field_, clearance)
        if goal is None:
            continue
        cell, cost = goal
        center = explored.center_of(*cell)
        if any(math.dist(center, v) <= blacklist_radius for v in visited):
            continue
        utility = frontier.info_gain / max(cost, res)
        if utility > best_utility:
            best, best_utility = (frontier, cell), utility
    if best is None:
        return None
    frontier, cell = best
    return frontier, cell, path_from_predecessors(predecessors, source, cell)


def explore(world, start: Pose2, config: ExploreConfig | None = None,
            map_builder: MapBuilderCallback | None = None) -> ExploreResult:
    config = config or ExploreConfig()
    truth = world.truth
    if truth.state_at(start.x, start.y) != CellState.FREE:
        raise ObstacleError(f"pose inside obstacle at ({start.x:.3f}, {start.y:.3f})")
    clearance = truth.resolution if config.clearance is None else config.clearance
    rng = np.random.default_rng(config.seed)
    explored = OccupancyGrid.unknown_like(truth)
    trajectory = []

    def sense(pose):
        nonlocal explored
        scan_pose = Pose2(pose.x, pose.y, 0.0)
        scan = raycast_scan(world, scan_pose, config.n_beams, config.max_range,
                            config.noise_std, rng)
        explored = integrate_scan(explored, scan_pose, scan)
        trajectory.append(pose)
        if map_builder is not None:
            map_builder(pose, scan, explored)

    sense(start)
    steps = 0
    visited = []
    finished = False
    while steps < config.budget:
        pose = trajectory[-1]
        frontiers = detect_frontiers(explored, config.min_frontier_cells, config.info_radius)
        target = select_frontier(explored, pose, frontiers, clearance, visited,
                                 config.blacklist_radius)
        if target is None:
            finished = True
            break
        frontier, goal, cells = target
        goal_xy = explored.center_of(*goal)
        points = [pose.position] + cells_to_points(explored, cells[1:])
        poses = move_along(world, shorten_path(explored, points, clearance), config.step)[1:]
        logger.debug("step %d: frontier at (%.2f, %.2f), goal (%.2f, %.2f), %d poses",
                     steps, *frontier.centroid, *goal_xy, len(poses))
        reached = True
        for count, next_pose in enumerate(poses, start=1):
            sense(next_pose)
            steps += 1
            if count == len(poses):
                break
            if steps >= config.budget or count >= config.replan_every \
                    or not still_frontier(explored, frontier):
                reached = False
                break
        if reached:
            visited.append(goal_xy)

    result = ExploreResult(trajectory, explored, finished, steps, visited)
    if finished:
        logger.info("exploration of %s finished after %d steps, %.1f%% of free space seen",
                    world.name, steps, 100.0 * result.coverage(truth))
    else:
        logger.warning("exploration of %s stopped by the step budget (%d steps)",
                       world.name, config.budget)
    return result
