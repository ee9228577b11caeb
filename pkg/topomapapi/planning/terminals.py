"""Choice of the entry and exit nodes of a route"""
from __future__ import annotations

import math

import numpy as np

from ..exceptions import PlanningError
from ..fht.graph import FhtMap
from ..fht.node import MapNode
from .topo import all_pairs_topo


def eq11_access_cost(n, node: MapNode, k: float = 1000.0) -> float:
    """Distance from n to the node, multiplied by k when n lies outside the
    node's free rectangle.
    """
    if not k > 1:
        raise ValueError("k must be greater than 1")
    distance = math.dist(n, node.position)
    return distance if node.free_rect.contains(n) else k * distance


def select_terminals(fht_map: FhtMap, n_s, n_d, k: float = 1000.0) -> tuple[int, int, float]:
    """Node pair minimizing access(n_s, v_s) + route(v_s, v_d) + access(n_d, v_d).
    Ties go to the lexicographically smallest (v_s, v_d).
    """
    if fht_map.is_empty:
        raise PlanningError("cannot plan on an empty map")
    f_s = np.array([eq11_access_cost(n_s, node, k) for node in fht_map.nodes])
    f_d = np.array([eq11_access_cost(n_d, node, k) for node in fht_map.nodes])
    total = f_s[:, None] + all_pairs_topo(fht_map) + f_d[None, :]
    start, end = np.unravel_index(int(np.argmin(total)), total.shape)
    cost = float(total[start, end])
    if not math.isfinite(cost):
        raise PlanningError("no connected pair of nodes")
    return int(start), int(end), cost
