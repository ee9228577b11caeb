"""Online map construction, one exploration step at a time.

Each step runs the main-node check, then the support-node check, and for
every node created: edges to all visible nodes, the previous node's free
rectangle, and refinement. Modes:

- ``fht``: main and support nodes, shortcut refinement with ``rho``.
- ``main_only``: every trigger creates a full main node, no shortcuts.
- ``feature_only``: built like ``main_only``; differs at relocalization time.
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from typing import NamedTuple, Optional

import numpy as np

from ..exceptions import ConfigurationError
from ..world.descriptor import Descriptor, HistogramDescriptor
from ..world.geometry import Pose2
from ..world.grid import OccupancyGrid
from ..world.mapping import segment_in_free
from ..world.raycast import LaserScan, raycast_scan
from .capability import entropy, reloc_capability
from .graph import FhtMap, MapMeta
from .node import MapNode, NodeKind, Rect
from .rect import cell_rect, finalize_previous_rect, grow_free_rect, refresh_rect
from .refine import (connect_visible, detached_components, refine_map, repair_connectivity,
                     support_factory)

logger = logging.getLogger(__name__)

MODES = ("fht", "main_only", "feature_only")


class Candidate(NamedTuple):
    pose: Pose2
    descriptor: Descriptor
    scan: LaserScan
    entropy: float


@dataclass
class BuilderState:
    gamma1: float = 1.0
    gamma2: float = 0.5
    sigma_c: float = 2.65
    th_s: float = 3.0
    n_bins: int = 10
    candidates: list[Candidate] = field(default_factory=list)
    in_candidate_phase: bool = False
    retry_every: int = 10
    steps_detached: int = 0

    def __post_init__(self):
        if not self.gamma2 < self.gamma1:
            raise ConfigurationError(f"gamma2 ({self.gamma2}) must be below gamma1 ({self.gamma1})")
        if not self.sigma_c > 0:
            raise ConfigurationError("sigma_c must be positive")
        if not self.th_s > 0:
            raise ConfigurationError("th_s must be positive")
        if self.n_bins < 2:
            raise ConfigurationError("n_bins must be at least 2")


def _provisional_rect(fht_map: FhtMap, position, explored: Optional[OccupancyGrid]) -> Rect:
    if explored is not None:
        return cell_rect(explored, position)
    return Rect.around(position, fht_map.meta.resolution)


def add_main_node(fht_map: FhtMap, pose: Pose2, d: Descriptor, scan: LaserScan,
                  value: float, explored: Optional[OccupancyGrid] = None) -> MapNode:
    return fht_map.add_node(NodeKind.MAIN, pose.position,
                            _provisional_rect(fht_map, pose.position, explored), d, scan, value)


def update_main_node(state: BuilderState, fht_map: FhtMap, pose: Pose2, d: Descriptor,
                     scan: LaserScan, explored: Optional[OccupancyGrid] = None) -> Optional[MapNode]:
    if fht_map.is_empty:
        return add_main_node(fht_map, pose, d, scan, entropy(d, state.n_bins), explored)

    capability = reloc_capability(fht_map, pose.position, state.sigma_c)
    if not state.in_candidate_phase and capability < state.gamma1:
        state.in_candidate_phase = True
    if not state.in_candidate_phase:
        return None
    if capability > state.gamma2:
        state.candidates.append(Candidate(pose, d, scan, entropy(d, state.n_bins)))
        return None

    if state.candidates:
        # max() keeps the first of equal entropies
        best = max(state.candidates, key=lambda c: c.entropy)
    else:
        best = Candidate(pose, d, scan, entropy(d, state.n_bins))
    state.candidates = []
    state.in_candidate_phase = False
    return add_main_node(fht_map, best.pose, best.descriptor, best.scan, best.entropy, explored)


def support_trigger(fht_map: FhtMap, pose: Pose2, explored: OccupancyGrid, th_s: float,
                    clearance: float) -> bool:
    """True when pose is farther than th_s from every node, or no node can be
    reached from pose in a straight free line.
    """
    if fht_map.is_empty:
        return False
    distances = np.hypot(*(fht_map.positions() - np.asarray(pose.position)).T)
    if distances.min() > th_s:
        return True
    for index in np.argsort(distances, kind="stable"):
        if segment_in_free(explored, fht_map.nodes[index].position, pose.position, clearance):
            return False
    return True


def update_support_node(fht_map: FhtMap, pose: Pose2, explored: OccupancyGrid, th_s: float,
                        clearance: float) -> Optional[MapNode]:
    if not support_trigger(fht_map, pose, explored, th_s, clearance):
        return None
    return fht_map.add_node(NodeKind.SUPPORT, pose.position, cell_rect(explored, pose.position))


def add_edges(fht_map: FhtMap, new_node: MapNode, explored: OccupancyGrid,
              clearance: float) -> int:
    return connect_visible(fht_map, new_node, explored, clearance)


def build_step(state: BuilderState, fht_map: FhtMap, pose: Pose2, d: Descriptor,
               scan: LaserScan, explored: OccupancyGrid, *, mode: str = "fht",
               clearance: Optional[float] = None, rho: float = 1.5,
               max_half_extent: float = 7.0, make_node=support_factory,
               trail=()) -> list[MapNode]:
    """Run one construction step and return every node it created.

    trail lists the positions visited so far, oldest first. Any component cut
    off from node 0 is joined again before returning, along the grid or,
    failing that, along the trail.
    """
    clearance = explored.resolution if clearance is None else clearance
    first = len(fht_map)
    node = update_main_node(state, fht_map, pose, d, scan, explored)
    if node is None:
        if mode == "fht":
            node = update_support_node(fht_map, pose, explored, state.th_s, clearance)
        elif support_trigger(fht_map, pose, explored, state.th_s, clearance):
            node = add_main_node(fht_map, pose, d, scan, entropy(d, state.n_bins), explored)
    if node is not None:
        add_edges(fht_map, node, explored, clearance)
        finalize_previous_rect(fht_map, explored, max_half_extent)
        logger.debug("created %s node %d at (%.2f, %.2f)", node.kind.value, node.id,
                     *node.position)
        refine_map(fht_map, explored, node, rho if mode == "fht" else math.inf, state.th_s,
                   clearance, make_node)
    if not fht_map.is_connected():
        # cut-off components left from earlier steps are retried every retry_every steps
        if node is not None or state.steps_detached >= state.retry_every:
            repair_connectivity(fht_map, explored, state.th_s, clearance, make_node, trail)
            state.steps_detached = 0
        else:
            state.steps_detached += 1
    return fht_map.nodes[first:]


class MapBuilder:
    """Construction callback for exploration.explore.

    Senses the descriptor at every pose and feeds build_step. Nodes added by
    refinement are support nodes in ``fht`` mode and sensed main nodes in the
    other modes.
    """

    def __init__(self, world, mode: str = "fht", state: Optional[BuilderState] = None, *,
                 rho: float = 1.5, clearance: Optional[float] = None,
                 max_half_extent: float = 7.0, descriptor=None, n_beams: int = 360,
                 max_range: float = 7.0):
        if mode not in MODES:
            raise ConfigurationError(f"unknown mode {mode!r}, expected one of {', '.join(MODES)}")
        self.world = world
        self.mode = mode
        self.state = state or BuilderState()
        self.rho = rho
        self.clearance = world.resolution if clearance is None else clearance
        self.max_half_extent = max_half_extent
        self.descriptor = descriptor or HistogramDescriptor(max_range=max_range)
        self.n_beams = n_beams
        self.max_range = max_range
        self.map = FhtMap(MapMeta(self.descriptor.dim, world.resolution))
        self.steps = 0
        self.trail: list[tuple[float, float]] = []

    def sense(self, position):
        scan = raycast_scan(self.world, Pose2(position[0], position[1], 0.0),
                            self.n_beams, self.max_range)
        return self.descriptor(self.world, position), scan

    def _sensed_main_node(self, fht_map, position, explored):
        d, scan = self.sense(position)
        return fht_map.add_node(NodeKind.MAIN, position, grow_free_rect(explored, position),
                                d, scan, entropy(d, self.state.n_bins))

    def _make_node(self):
        return support_factory if self.mode == "fht" else self._sensed_main_node

    def __call__(self, pose: Pose2, scan: LaserScan, explored: OccupancyGrid) -> list[MapNode]:
        self.steps += 1
        self.trail.append(pose.position)
        d = self.descriptor(self.world, pose.position)
        return build_step(self.state, self.map, pose, d, scan, explored, mode=self.mode,
                          clearance=self.clearance, rho=self.rho,
                          max_half_extent=self.max_half_extent, make_node=self._make_node(),
                          trail=self.trail)

    def finish(self, explored: OccupancyGrid) -> FhtMap:
        """Join any component still cut off, then regrow every rectangle
        against the final explored grid.
        """
        if not self.map.is_connected():
            repair_connectivity(self.map, explored, self.state.th_s, self.clearance,
                                self._make_node(), self.trail)
        if not self.map.is_connected():
            logger.warning("%s map of %s is not connected: %d component(s) cut off from node 0",
                           self.mode, self.world.name, len(detached_components(self.map)))
        for node in self.map.nodes:
            refresh_rect(self.map, node.id, explored, self.max_half_extent)
        counts = self.map.counts()
        logger.info("%s map built: %d main, %d support, %d edges", self.mode,
                    counts["main"], counts["support"], counts["edges"])
        return self.map


class FanOut:
    """Feed one exploration run into several builders"""

    def __init__(self, *builders):
        self.builders = builders

    def __call__(self, pose, scan, explored):
        for builder in self.builders:
            builder(pose, scan, explored)
