"""Shortcut refinement and connectivity repair.

After a node is created, every older node is compared against it: when the
graph route is much longer than the free-space route (or missing entirely),
new nodes are laid along the grid path so the graph can follow it.
"""
from __future__ import annotations

import logging
import math
from typing import Callable

import networkx as nx

from ..world.grid import OccupancyGrid
from ..world.gridsearch import (cells_to_points, distance_field, grid_graph, navigable_mask,
                                path_from_predecessors)
from ..world.mapping import segment_in_free
from .graph import FhtMap
from .node import MapNode, NodeKind
from .rect import grow_free_rect

logger = logging.getLogger(__name__)

NodeFactory = Callable[[FhtMap, tuple[float, float], OccupancyGrid], MapNode]


def support_factory(fht_map: FhtMap, position, explored: OccupancyGrid) -> MapNode:
    return fht_map.add_node(NodeKind.SUPPORT, position, grow_free_rect(explored, position))


def connect_visible(fht_map: FhtMap, node: MapNode, explored: OccupancyGrid,
                    clearance: float) -> int:
    added = 0
    for other in fht_map.nodes:
        if other.id == node.id:
            continue
        if segment_in_free(explored, other.position, node.position, clearance):
            added += fht_map.add_edge(node.id, other.id)
    return added


def place_along_path(fht_map: FhtMap, explored: OccupancyGrid, start: MapNode, target: MapNode,
                     path, th_s: float, clearance: float, make_node: NodeFactory) -> int:
    """Chain nodes from start towards target along path (a list of points).

    Each hop goes to the farthest path point that is visible from the current
    anchor and no more than th_s away; when nothing within th_s is visible the
    farthest visible point is taken regardless of distance. A visible node
    within th_s / 2 of that point is reused instead of creating a new one.
    Reaching the target ends the chain. Returns the number of nodes created.
    """
    created = 0
    anchor, index = start, 0
    while anchor.id != target.id:
        if math.dist(anchor.position, target.position) <= th_s and segment_in_free(
                explored, anchor.position, target.position, clearance):
            fht_map.add_edge(anchor.id, target.id)
            return created
        best = _farthest_visible(explored, anchor.position, path, index, th_s, clearance)
        if best is None:
            best = _farthest_visible(explored, anchor.position, path, index, math.inf, clearance)
        if best is None:
            logger.debug("no visible hop from node %d towards node %d", anchor.id, target.id)
            return created
        point = path[best]
        reuse = None
        for other in fht_map.nodes:
            if other.id != anchor.id and math.dist(other.position, point) <= th_s / 2.0 \
                    and segment_in_free(explored, anchor.position, other.position, clearance):
                if reuse is None or math.dist(other.position, point) < math.dist(reuse.position, point):
                    reuse = other
        if reuse is None:
            reuse = make_node(fht_map, point, explored)
            connect_visible(fht_map, reuse, explored, clearance)
            created += 1
            logger.debug("placed %s node %d at (%.2f, %.2f)", reuse.kind.value, reuse.id, *point)
        else:
            fht_map.add_edge(anchor.id, reuse.id)
        anchor, index = reuse, best
    return created


def _farthest_visible(explored: OccupancyGrid, origin, path, index: int, reach: float,
                      clearance: float):
    best = None
    for k in range(index + 1, len(path)):
        if math.dist(origin, path[k]) > reach:
            break
        if segment_in_free(explored, origin, path[k], clearance):
            best = k
    return best


def refine_map(fht_map: FhtMap, explored: OccupancyGrid, new_node: MapNode, rho: float,
               th_s: float, clearance: float | None = None,
               make_node: NodeFactory = support_factory) -> int:
    """Add nodes wherever the graph distance from new_node exceeds rho times
    the grid distance, or where new_node has no graph route at all.
    Returns the number of nodes added.
    """
    clearance = explored.resolution if clearance is None else clearance
    others = [n for n in fht_map.nodes if n.id != new_node.id]
    if not others:
        return 0
    if math.isinf(rho):
        graph = fht_map.to_networkx()
        if nx.node_connected_component(graph, new_node.id) == set(graph.nodes):
            return 0

    mask = navigable_mask(explored, clearance, *(n.position for n in fht_map.nodes))
    source = explored.cell_of(*new_node.position)
    graph_cells = grid_graph(mask, explored.resolution)
    field, predecessors = distance_field(mask, explored.resolution, source, graph_cells)

    added = 0
    for other in others:
        d_grid = float(field[explored.cell_of(*other.position)])
        if not math.isfinite(d_grid):
            continue
        try:
            d_topo = nx.dijkstra_path_length(fht_map.to_networkx(), new_node.id, other.id)
        except nx.NetworkXNoPath:
            d_topo = math.inf
        if not (math.isinf(d_topo) or d_topo > rho * d_grid):
            continue
        cells = path_from_predecessors(predecessors, source, explored.cell_of(*other.position))
        path = [new_node.position] + cells_to_points(explored, cells[1:-1]) + [other.position]
        logger.debug("refining %d -> %d: topo %.2f m, grid %.2f m", new_node.id, other.id,
                     d_topo, d_grid)
        added += place_along_path(fht_map, explored, new_node, other, path, th_s, clearance,
                                  make_node)
    return added


def detached_components(fht_map: FhtMap) -> list[set[int]]:
    """Components that do not hold node 0, newest first"""
    if len(fht_map) <= 1:
        return []
    components = nx.connected_components(fht_map.to_networkx())
    return sorted((c for c in components if 0 not in c), key=max, reverse=True)


def _rooted(fht_map: FhtMap) -> set[int]:
    return nx.node_connected_component(fht_map.to_networkx(), 0)


def bridge_to_graph(fht_map: FhtMap, explored: OccupancyGrid, node: MapNode, th_s: float,
                    clearance: float, make_node: NodeFactory = support_factory) -> int:
    """Chain nodes along the grid path from node to the nearest reachable node
    of the component holding node 0. Returns the number of nodes created.
    """
    rooted = _rooted(fht_map)
    mask = navigable_mask(explored, clearance, *(n.position for n in fht_map.nodes))
    source = explored.cell_of(*node.position)
    field, predecessors = distance_field(mask, explored.resolution, source)
    reachable = [(float(field[explored.cell_of(*fht_map.node(i).position)]), i) for i in sorted(rooted)]
    reachable = [(d, i) for d, i in reachable if math.isfinite(d)]
    if not reachable:
        return 0
    target = fht_map.node(min(reachable)[1])
    cells = path_from_predecessors(predecessors, source, explored.cell_of(*target.position))
    path = [node.position] + cells_to_points(explored, cells[1:-1]) + [target.position]
    return place_along_path(fht_map, explored, node, target, path, th_s, clearance, make_node)


def bridge_along_trail(fht_map: FhtMap, explored: OccupancyGrid, node: MapNode, trail,
                       th_s: float, clearance: float, make_node: NodeFactory = support_factory,
                       patience: int = 8) -> int:
    """Follow the robot's own trail back from node until a node of the
    component holding node 0 comes into view.

    trail holds the positions visited so far, oldest first; node 0 sits on
    trail[0]. Each hop goes to the oldest trail position within th_s that is
    still in view, and the scan stops after ``patience`` hidden positions in a
    row. Returns the number of nodes created.
    """
    trail = [tuple(map(float, p)) for p in trail]
    position = tuple(map(float, node.position))
    index = next((i for i in range(len(trail) - 1, -1, -1) if trail[i] == position), None)
    if index is None:
        return 0
    created = 0
    anchor = node
    while anchor.id not in _rooted(fht_map):
        best, misses = None, 0
        for k in range(index - 1, -1, -1):
            if math.dist(anchor.position, trail[k]) > th_s:
                break
            if segment_in_free(explored, anchor.position, trail[k], clearance):
                best, misses = k, 0
            else:
                misses += 1
                if misses > patience:
                    break
        if best is None:
            logger.debug("trail from node %d breaks at position %d", node.id, index)
            return created
        point = trail[best]
        reuse = next((n for n in fht_map.nodes if n.id != anchor.id
                      and math.dist(n.position, point) <= clearance
                      and segment_in_free(explored, anchor.position, n.position, clearance)), None)
        if reuse is None:
            reuse = make_node(fht_map, point, explored)
            created += 1
            logger.debug("placed %s node %d on the trail at (%.2f, %.2f)", reuse.kind.value,
                         reuse.id, *point)
        fht_map.add_edge(anchor.id, reuse.id)
        connect_visible(fht_map, reuse, explored, clearance)
        anchor, index = reuse, best
    return created


def repair_connectivity(fht_map: FhtMap, explored: OccupancyGrid, th_s: float, clearance: float,
                        make_node: NodeFactory = support_factory, trail=()) -> int:
    """Join every component that lost its route to node 0.

    Tries, per component: new lines of sight, the grid path, then the trail.
    Returns the number of nodes created; components that cannot be joined yet
    are retried on the next call.
    """
    created = 0
    for component in detached_components(fht_map):
        if not component.isdisjoint(_rooted(fht_map)):
            continue
        for node_id in sorted(component):
            connect_visible(fht_map, fht_map.node(node_id), explored, clearance)
        newest = fht_map.node(max(component))
        if newest.id not in _rooted(fht_map):
            created += bridge_to_graph(fht_map, explored, newest, th_s, clearance, make_node)
        for node_id in sorted(component, reverse=True):
            if node_id in _rooted(fht_map):
                break
            created += bridge_along_trail(fht_map, explored, fht_map.node(node_id), trail, th_s,
                                          clearance, make_node)
    remaining = detached_components(fht_map)
    if remaining:
        logger.debug("%d component(s) still detached from node 0", len(remaining))
    return created
