"""Following a planned route, skipping waypoints that can be seen past"""
from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Optional

from ..exceptions import RouteBlockedError
from ..world.gridsearch import grid_path, path_length
from ..world.mapping import segment_in_free
from ..world.motion import move_along
from .planner import PlanResult

logger = logging.getLogger(__name__)


def skip_route(waypoints, explored, clearance: float) -> list[tuple[float, float]]:
    """Polyline through the waypoints that heads straight for the farthest
    visible later waypoint at every stop. A stop that sees no later waypoint
    reaches the next one over the grid instead.
    """
    points = [tuple(map(float, w)) for w in waypoints]
    route = [points[0]]
    current = 0
    while current < len(points) - 1:
        target = None
        for later in range(len(points) - 1, current, -1):
            if segment_in_free(explored, points[current], points[later], clearance):
                target = later
                break
        if target is None:
            target = current + 1
            leg = grid_path(explored, points[current], points[target], clearance)
            if leg is None:
                raise RouteBlockedError(
                    f"waypoint {target} at ({points[target][0]:.2f}, {points[target][1]:.2f}) "
                    "cannot be reached", target, points[target])
            route.extend(leg[1:])
        else:
            if target > current + 1:
                logger.debug("skipping waypoints %d..%d", current + 1, target - 1)
            route.append(points[target])
        current = target
    return route


@dataclass
class ExecutionResult:
    traveled: float
    reached: bool
    blocked_node: Optional[int] = None
    blocked_at: Optional[tuple[float, float]] = None
    error: Optional[str] = None

    def __iter__(self):
        yield self.traveled
        yield self.reached


def execute_with_skip(world, plan: PlanResult, explored, clearance: float | None = None,
                      step: float = 0.25) -> ExecutionResult:
    """Drive the route in the world. A route with an unreachable waypoint is
    not driven at all; the result names the blocked node (None for the goal)
    and where the blocked waypoint lies.
    """
    clearance = explored.resolution if clearance is None else clearance
    try:
        route = skip_route(plan.waypoints, explored, clearance)
    except RouteBlockedError as ex:
        logger.warning("route from node %d to node %d not executable: %s", plan.start_node,
                       plan.end_node, ex)
        # waypoints are the start, one per node of node_path, then the goal
        node = None
        if ex.waypoint is not None and 1 <= ex.waypoint <= len(plan.node_path):
            node = plan.node_path[ex.waypoint - 1]
        return ExecutionResult(0.0, False, node, ex.location, str(ex))
    move_along(world, route, step)
    return ExecutionResult(path_length(route), True)
