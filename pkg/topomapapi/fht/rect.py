"""Free-space rectangles grown around nodes"""
from __future__ import annotations

from ..exceptions import ObstacleError
from ..world.grid import CellState, OccupancyGrid
from .graph import FhtMap
from .node import Rect

_TOUCH = 1e-9


def cell_rect(explored: OccupancyGrid, position) -> Rect:
    """The single grid cell containing position"""
    row, col = explored.cell_of(*position)
    res = explored.resolution
    x0 = explored.origin.x + col * res
    y0 = explored.origin.y + row * res
    return Rect(x0, y0, x0 + res, y0 + res)


def grow_free_rect(explored: OccupancyGrid, center, max_half_extent: float = 7.0) -> Rect:
    """Grow a rectangle of free cells from the cell holding center.

    Sides are tried in the order +x, -x, +y, -y, one cell at a time. A side
    freezes once the new row or column would leave free space or push that
    side more than max_half_extent away from center.
    """
    cx, cy = center
    if explored.state_at(cx, cy) != CellState.FREE:
        raise ObstacleError(f"rectangle center ({cx:.3f}, {cy:.3f}) is not free")
    row, col = explored.cell_of(cx, cy)
    rmin = rmax = row
    cmin = cmax = col
    res = explored.resolution
    ox, oy = explored.origin.x, explored.origin.y
    free = explored.free_mask
    limit = max_half_extent + _TOUCH

    frozen = [False, False, False, False]
    while not all(frozen):
        for side in range(4):
            if frozen[side]:
                continue
            if side == 0:
                ok = (cmax + 1 < explored.width and ox + (cmax + 2) * res - cx <= limit
                      and free[rmin:rmax + 1, cmax + 1].all())
                if ok:
                    cmax += 1
            elif side == 1:
                ok = (cmin - 1 >= 0 and cx - (ox + (cmin - 1) * res) <= limit
                      and free[rmin:rmax + 1, cmin - 1].all())
                if ok:
                    cmin -= 1
            elif side == 2:
                ok = (rmax + 1 < explored.height and oy + (rmax + 2) * res - cy <= limit
                      and free[rmax + 1, cmin:cmax + 1].all())
                if ok:
                    rmax += 1
            else:
                ok = (rmin - 1 >= 0 and cy - (oy + (rmin - 1) * res) <= limit
                      and free[rmin - 1, cmin:cmax + 1].all())
                if ok:
                    rmin -= 1
            frozen[side] = not ok
    return Rect(ox + cmin * res, oy + rmin * res, ox + (cmax + 1) * res, oy + (rmax + 1) * res)


def refresh_rect(fht_map: FhtMap, node_id: int, explored: OccupancyGrid,
                 max_half_extent: float = 7.0) -> Rect:
    node = fht_map.node(node_id)
    grown = grow_free_rect(explored, node.position, max_half_extent)
    if grown.area >= node.free_rect.area:
        node.free_rect = grown
    return node.free_rect


def finalize_previous_rect(fht_map: FhtMap, explored: OccupancyGrid,
                           max_half_extent: float = 7.0) -> None:
    """Regrow the rectangle of the second newest node against the current
    explored grid. The newest node keeps its provisional rectangle.
    """
    if len(fht_map) < 2:
        return
    refresh_rect(fht_map, len(fht_map) - 2, explored, max_half_extent)
