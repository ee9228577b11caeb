"""Route planning on a relocalized map"""
from __future__ import annotations

from dataclasses import dataclass

from ..exceptions import PlanningError
from ..fht.graph import FhtMap
from ..world.geometry import Transform2
from .terminals import select_terminals
from .topo import shortest_topo


@dataclass
class PlanResult:
    start_node: int
    end_node: int
    waypoints: list[tuple[float, float]]
    topo_length: float
    total_cost: float
    node_path: list[int]

    def as_dict(self) -> dict:
        return {
            "start_node": self.start_node,
            "end_node": self.end_node,
            "topo_length_m": self.topo_length,
            "total_cost": self.total_cost,
            "waypoints": [[x, y] for x, y in self.waypoints],
        }


def plan(fht_map: FhtMap, t_map_odom: Transform2, n_s_odom, n_d_map, k: float = 1000.0) -> PlanResult:
    """Plan from a start given in the odometry frame to a goal given in the
    map frame. Waypoints run start, entry node ... exit node, goal.
    """
    if fht_map.is_empty:
        raise PlanningError("cannot plan on an empty map")
    n_s = t_map_odom.apply(tuple(n_s_odom))
    n_d = (float(n_d_map[0]), float(n_d_map[1]))
    start, end, cost = select_terminals(fht_map, n_s, n_d, k)
    length, path = shortest_topo(fht_map, start, end)
    waypoints = [n_s] + [fht_map.node(i).position for i in path] + [n_d]
    return PlanResult(start, end, waypoints, length, cost, path)
