"""Single relocalization hypotheses"""
from __future__ import annotations

from dataclasses import dataclass

from ..exceptions import NodeKindError
from ..fht.graph import FhtMap
from ..world.geometry import Pose2, Transform2


@dataclass(frozen=True)
class Estimation:
    node_id: int
    t_node_robot: Transform2
    t_est: Transform2
    score: float = 1.0
    icp_rms: float = 0.0


def node_frame(fht_map: FhtMap, node_id: int) -> Transform2:
    """Map pose of a node's scan frame: its position with heading 0"""
    node = fht_map.node(node_id)
    return Transform2(node.position[0], node.position[1], 0.0)


def make_estimation(fht_map: FhtMap, node_id: int, t_node_robot: Transform2, odom_pose: Pose2,
                    score: float = 1.0, icp_rms: float = 0.0) -> Estimation:
    """map<-odom = map<-node * node<-robot * (odom<-robot)^-1"""
    node = fht_map.node(node_id)
    if not node.is_main:
        raise NodeKindError(f"node {node_id} is a support node and holds no scan")
    t_est = node_frame(fht_map, node_id) @ t_node_robot @ odom_pose.as_transform().inverse()
    return Estimation(node_id, t_node_robot, t_est, score, icp_rms)
