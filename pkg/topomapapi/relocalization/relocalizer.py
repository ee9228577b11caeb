"""Global relocalization along a walk.

At every pose the robot senses a descriptor and a scan. A descriptor match
against a main node followed by scan alignment gives one estimation of the
map<-odom transform. Only the largest group of mutually agreeing
estimations is kept; it is filtered and averaged after each new one, and
the walk has relocalized once that group reaches min_estimations.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Optional

from ..exceptions import AlignmentError, InsufficientOverlapError
from ..fht.graph import FhtMap
from ..world.descriptor import HistogramDescriptor
from ..world.geometry import Pose2, Transform2
from ..world.raycast import raycast_scan
from .estimation import Estimation, make_estimation
from .icp import global_icp
from .matching import match_descriptor
from .robust import (CONSENSUS_ANGLE, CONSENSUS_TRANSLATION, consensus, optimize_transform,
                     reject_outliers)

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class RelocConfig:
    th_match: float = 0.85
    n_seeds: int = 36
    rms_accept: float = 0.2
    min_estimations: int = 3
    loss: str = "huber"
    n_beams: int = 360
    max_range: float = 7.0
    feature_only: bool = False
    max_attempts: int = 3
    consensus_translation: float = CONSENSUS_TRANSLATION
    consensus_angle: float = CONSENSUS_ANGLE


@dataclass
class RelocResult:
    t_final: Transform2
    n_used: int
    converged: bool
    trail_length: float
    estimations: list[Estimation] = field(default_factory=list)
    icp_runs: int = 0

    def as_dict(self) -> dict:
        return {
            "t_final": {"x": self.t_final.x, "y": self.t_final.y, "theta": self.t_final.theta},
            "n_used": self.n_used,
            "converged": self.converged,
            "trail_length_m": self.trail_length,
        }


class Relocalizer:
    """Incremental relocalization against one map. Feed true robot poses to
    observe(); the hidden odom_offset turns them into odometry poses.
    """

    def __init__(self, fht_map: FhtMap, world, odom_offset: Transform2,
                 config: Optional[RelocConfig] = None, descriptor=None):
        self.map = fht_map
        self.world = world
        self.odom_offset = odom_offset
        self.config = config or RelocConfig()
        self.descriptor = descriptor or HistogramDescriptor(
            self.config.max_range, fht_map.meta.descriptor_dim)
        self.estimations: list[Estimation] = []
        self.kept: list[Estimation] = []
        self.t_final = Transform2.identity()
        self.icp_runs = 0
        self._attempts: dict[int, int] = {}

    @property
    def n_used(self) -> int:
        return len(self.kept)

    @property
    def converged(self) -> bool:
        return self.n_used >= self.config.min_estimations

    def odom_pose(self, true_pose: Pose2) -> Pose2:
        return self.odom_offset.inverse() @ true_pose

    def _done(self, node_id: int) -> bool:
        if any(e.node_id == node_id for e in self.estimations):
            return True
        return self._attempts.get(node_id, 0) >= self.config.max_attempts

    def observe(self, true_pose: Pose2) -> Optional[Estimation]:
        """Try to add an estimation at this pose; returns it when one was added"""
        match = match_descriptor(self.map, self.descriptor(self.world, true_pose.position),
                                 self.config.th_match)
        if match is None or self._done(match[0]):
            return None
        node_id, score = match
        self._attempts[node_id] = self._attempts.get(node_id, 0) + 1
        if self.config.feature_only:
            t_node_robot, rms = Transform2.identity(), 0.0
        else:
            scan = raycast_scan(self.world, true_pose, self.config.n_beams, self.config.max_range)
            self.icp_runs += 1
            try:
                t_node_robot, rms = global_icp(self.map.node(node_id).scan, scan,
                                               self.config.n_seeds, self.config.rms_accept)
            except (InsufficientOverlapError, AlignmentError) as ex:
                logger.debug("node %d matched (%.3f) but alignment failed: %s", node_id, score, ex)
                return None
        estimation = self.add(make_estimation(self.map, node_id, t_node_robot,
                                              self.odom_pose(true_pose), score, rms))
        logger.debug("estimation %d from node %d: (%.3f, %.3f, %.3f), %d kept",
                     len(self.estimations), node_id, estimation.t_est.x, estimation.t_est.y,
                     estimation.t_est.theta, self.n_used)
        return estimation

    def add(self, estimation: Estimation) -> Estimation:
        """Record an estimation and refresh the kept group and t_final"""
        self.estimations.append(estimation)
        self.kept = reject_outliers(consensus(self.estimations, self.config.consensus_translation,
                                              self.config.consensus_angle))
        self.t_final = optimize_transform(self.kept, self.config.loss)
        return estimation

    def result(self, trail_length: float) -> RelocResult:
        return RelocResult(self.t_final, self.n_used, self.converged, trail_length,
                           list(self.estimations), self.icp_runs)


def relocalize(fht_map: FhtMap, world, odom_offset: Transform2, walk,
               config: Optional[RelocConfig] = None, descriptor=None) -> RelocResult:
    """Walk until enough consistent estimations agree. trail_length is the
    distance walked when that first happened, or the whole walk otherwise.
    """
    relocalizer = Relocalizer(fht_map, world, odom_offset, config, descriptor)
    walked = 0.0
    previous = None
    for pose in walk:
        if previous is not None:
            walked += previous.distance_to(pose)
        previous = pose
        relocalizer.observe(pose)
        if relocalizer.converged:
            logger.info("relocalized after %.2f m with %d estimations", walked,
                        relocalizer.n_used)
            return relocalizer.result(walked)
    logger.info("walk of %.2f m ended without relocalization (%d estimations)", walked,
                len(relocalizer.estimations))
    return relocalizer.result(walked)
