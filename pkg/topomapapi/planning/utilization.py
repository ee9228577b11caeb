"""Relocalize, plan and drive, replanning whenever a new estimation arrives"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Optional

from ..exceptions import PlanningError
from ..fht.graph import FhtMap
from ..relocalization.relocalizer import RelocConfig, Relocalizer, RelocResult
from ..world.geometry import Pose2, Transform2
from ..world.gridsearch import grid_path
from ..world.mapping import segment_in_free
from ..world.motion import move_along
from .executor import skip_route
from .planner import PlanResult, plan

logger = logging.getLogger(__name__)


@dataclass
class UtilizeResult:
    reloc: RelocResult
    plan: Optional[PlanResult]
    traveled: float
    final_pose: Optional[Pose2] = None
    replans: int = 0

    def __iter__(self):
        yield self.reloc
        yield self.plan
        yield self.traveled

    def goal_error(self, n_d) -> float:
        if self.final_pose is None:
            return math.inf
        return self.final_pose.distance_to(tuple(n_d))


def _drive_leg(world, here: Pose2, target, step: float, clearance: float) -> Optional[list[Pose2]]:
    truth = world.truth
    if segment_in_free(truth, here.position, target, 0.0):
        path = [here.position, target]
    else:
        path = grid_path(truth, here.position, target, clearance)
        if path is None:
            return None
    return move_along(world, path, step)[1:]


def utilize(fht_map: FhtMap, world, odom_offset: Transform2, walk, n_d,
            config: Optional[RelocConfig] = None, *, k: float = 1000.0, step: float = 0.25,
            clearance: Optional[float] = None, t_map_odom: Optional[Transform2] = None,
            explored=None, descriptor=None, max_replans: int = 20,
            relocalizer: Optional[Relocalizer] = None) -> UtilizeResult:
    """Relocalize along walk (skipped when t_map_odom is given), then plan to
    the map-frame goal n_d and drive there. Each new estimation picked up on
    the way refines the transform and triggers a replan from where the robot
    stands.

    walk[0] is where the robot starts. A relocalizer passed in carries its
    estimations over; when it has already converged the walk is not used.
    """
    clearance = world.resolution if clearance is None else clearance
    explored = world.truth if explored is None else explored
    walk = list(walk)
    if not walk:
        raise PlanningError("utilize needs a walk holding at least the start pose")
    if relocalizer is None:
        relocalizer = Relocalizer(fht_map, world, odom_offset, config, descriptor)
    here = walk[0]

    if t_map_odom is not None:
        reloc = RelocResult(t_map_odom, 0, True, 0.0)
        relocalizer = None
    elif relocalizer.converged:
        reloc = relocalizer.result(0.0)
    else:
        walked = 0.0
        for pose in walk:
            walked += here.distance_to(pose)
            here = pose
            relocalizer.observe(pose)
            if relocalizer.converged:
                break
        reloc = relocalizer.result(walked)
        if not reloc.converged:
            logger.warning("no relocalization after %.2f m, nothing planned", walked)
            return UtilizeResult(reloc, None, 0.0, here)

    traveled = 0.0
    replans = 0
    current_plan = None
    goal = (float(n_d[0]), float(n_d[1]))
    while True:
        t_est = reloc.t_final if relocalizer is None else relocalizer.t_final
        odom_here = odom_offset.inverse() @ here
        current_plan = plan(fht_map, t_est, odom_here.position, goal, k)
        try:
            route = skip_route(current_plan.waypoints, explored, clearance)
        except PlanningError as ex:
            logger.warning("route not executable: %s", ex)
            break
        believed_to_true = odom_offset @ t_est.inverse()
        interrupted = False
        for waypoint in route[1:]:
            target = believed_to_true.apply(waypoint)
            leg = _drive_leg(world, here, target, step, clearance)
            if leg is None:
                logger.debug("waypoint (%.2f, %.2f) unreachable in the world", *target)
                continue
            for pose in leg:
                traveled += here.distance_to(pose)
                here = pose
                if relocalizer is not None and relocalizer.observe(pose) is not None:
                    interrupted = True
                    break
            if interrupted:
                break
        if not interrupted or replans >= max_replans:
            break
        replans += 1
        logger.debug("new estimation, replanning from (%.2f, %.2f)", *here.position)

    if relocalizer is not None:
        reloc.t_final = relocalizer.t_final
        reloc.n_used = relocalizer.n_used
    return UtilizeResult(reloc, current_plan, traveled, here, replans)
