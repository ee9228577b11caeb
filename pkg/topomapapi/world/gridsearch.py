"""Shortest paths over boolean cell masks.

Cells are 8-connected; a diagonal move needs both orthogonal neighbours open
so paths never cut an obstacle corner. Edge weights are metric (resolution
or resolution * sqrt(2)).
"""
from __future__ import annotations

import heapq
import math

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import dijkstra

from .mapping import inflation_cells, segment_in_free, traversable_mask

SQRT2 = math.sqrt(2.0)
_MOVES = ((0, 1), (1, 0), (1, 1), (1, -1))
_NEIGHBOURS = ((0, 1), (1, 0), (0, -1), (-1, 0), (1, 1), (1, -1), (-1, 1), (-1, -1))


def _shifted(height, width, dr, dc):
    r0, r1 = max(0, -dr), height - max(0, dr)
    c0, c1 = max(0, -dc), width - max(0, dc)
    return (r0, r1, c0, c1), (r0 + dr, r1 + dr, c0 + dc, c1 + dc)


def grid_graph(mask: np.ndarray, resolution: float) -> csr_matrix:
    """Sparse symmetric adjacency matrix over the flattened cell indices"""
    height, width = mask.shape
    index = np.arange(height * width).reshape(height, width)
    sources, targets, weights = [], [], []
    for dr, dc in _MOVES:
        (r0, r1, c0, c1), (s0, s1, d0, d1) = _shifted(height, width, dr, dc)
        if r1 <= r0 or c1 <= c0:
            continue
        ok = mask[r0:r1, c0:c1] & mask[s0:s1, d0:d1]
        cost = resolution
        if dr and dc:
            ok &= mask[r0:r1, d0:d1] & mask[s0:s1, c0:c1]
            cost = resolution * SQRT2
        a = index[r0:r1, c0:c1][ok]
        b = index[s0:s1, d0:d1][ok]
        sources.extend((a, b))
        targets.extend((b, a))
        weights.append(np.full(2 * len(a), cost))
    if not weights:
        return csr_matrix((height * width, height * width))
    return csr_matrix(
        (np.concatenate(weights), (np.concatenate(sources), np.concatenate(targets))),
        shape=(height * width, height * width))


def distance_field(mask: np.ndarray, resolution: float, source, graph=None):
    """Path distance from the source cell to every cell of mask.

    Returns (distances, predecessors) shaped like mask; unreachable cells hold
    inf and predecessor -9999.
    """
    height, width = mask.shape
    row, col = source
    if not (0 <= row < height and 0 <= col < width) or not mask[row, col]:
        return np.full(mask.shape, np.inf), np.full(mask.shape, -9999, dtype=np.int64)
    graph = graph if graph is not None else grid_graph(mask, resolution)
    distances, predecessors = dijkstra(
        graph, directed=True, indices=row * width + col, return_predecessors=True)
    return distances.reshape(mask.shape), predecessors.reshape(mask.shape)


def path_from_predecessors(predecessors: np.ndarray, source, target) -> list[tuple[int, int]]:
    """Walk predecessors back from target to source; [] when target was never reached"""
    width = predecessors.shape[1]
    source, target = (int(source[0]), int(source[1])), (int(target[0]), int(target[1]))
    if source == target:
        return [source]
    flat = predecessors.ravel()
    node = target[0] * width + target[1]
    if flat[node] < 0:
        return []
    path = [target]
    while flat[node] >= 0:
        node = int(flat[node])
        path.append(divmod(node, width))
    path.reverse()
    return [(int(r), int(c)) for r, c in path]


def octile(a, b, resolution: float) -> float:
    dr, dc = abs(a[0] - b[0]), abs(a[1] - b[1])
    return resolution * (max(dr, dc) + (SQRT2 - 1.0) * min(dr, dc))


def astar(mask: np.ndarray, start, goal, resolution: float):
    """A* between two cells with the octile heuristic. Returns the cell path
    from start to goal, or None when the goal cannot be reached.
    """
    height, width = mask.shape
    start, goal = (int(start[0]), int(start[1])), (int(goal[0]), int(goal[1]))
    for cell in (start, goal):
        if not (0 <= cell[0] < height and 0 <= cell[1] < width) or not mask[cell]:
            return None
    g_score = {start: 0.0}
    came_from = {}
    closed = set()
    counter = 0
    frontier = [(octile(start, goal, resolution), counter, start)]
    while frontier:
        _, _, current = heapq.heappop(frontier)
        if current == goal:
            path = [current]
            while current in came_from:
                current = came_from[current]
                path.append(current)
            path.reverse()
            return path
        if current in closed:
            continue
        closed.add(current)
        row, col = current
        for dr, dc in _NEIGHBOURS:
            r, c = row + dr, col + dc
            if not (0 <= r < height and 0 <= c < width) or not mask[r, c]:
                continue
            if dr and dc and not (mask[row, c] and mask[r, col]):
                continue
            step = resolution * (SQRT2 if dr and dc else 1.0)
            tentative = g_score[current] + step
            neighbour = (r, c)
            if tentative < g_score.get(neighbour, math.inf):
                g_score[neighbour] = tentative
                came_from[neighbour] = current
                counter += 1
                heapq.heappush(
                    frontier, (tentative + octile(neighbour, goal, resolution), counter, neighbour))
    return None


def path_length(points) -> float:
    pts = np.asarray(points, dtype=float).reshape(-1, 2)
    if len(pts) < 2:
        return 0.0
    return float(np.hypot(*np.diff(pts, axis=0).T).sum())


def shorten_path(grid, points, clearance: float = 0.0) -> list[tuple[float, float]]:
    """Greedy line-of-sight shortening: from each kept point extend the
    shortcut for as long as the segment stays in free space.
    """
    pts = [tuple(map(float, p)) for p in points]
    if len(pts) <= 2:
        return pts
    kept = [pts[0]]
    anchor = 0
    reach = 1
    while reach < len(pts) - 1:
        if segment_in_free(grid, pts[anchor], pts[reach + 1], clearance):
            reach += 1
            continue
        kept.append(pts[reach])
        anchor = reach
        reach = anchor + 1
    kept.append(pts[-1])
    return kept


def cells_to_points(grid, cells) -> list[tuple[float, float]]:
    return [grid.center_of(r, c) for r, c in cells]


def navigable_mask(grid, clearance: float, *positions) -> np.ndarray:
    """Traversable cells plus the free cells in a small window around each
    given position, so paths can start or end next to a wall.
    """
    mask = traversable_mask(grid, clearance)
    radius = inflation_cells(grid.resolution, clearance)
    free = grid.free_mask
    for x, y in positions:
        row, col = grid.cell_of(x, y)
        r0, r1 = max(row - radius, 0), min(row + radius + 1, grid.height)
        c0, c1 = max(col - radius, 0), min(col + radius + 1, grid.width)
        if r0 < r1 and c0 < c1:
            mask[r0:r1, c0:c1] |= free[r0:r1, c0:c1]
    return mask


def grid_path(grid, a, b, clearance: float, shorten: bool = True):
    """Metric path from a to b over navigable cells, or None if unreachable"""
    mask = navigable_mask(grid, clearance, a, b)
    cells = astar(mask, grid.cell_of(*a), grid.cell_of(*b), grid.resolution)
    if cells is None:
        return None
    points = [tuple(map(float, a))] + cells_to_points(grid, cells[1:-1]) + [tuple(map(float, b))]
    if shorten:
        points = shorten_path(grid, points, clearance)
    return points
