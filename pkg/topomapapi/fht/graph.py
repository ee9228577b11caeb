"""The hierarchical topological map: nodes plus traversable edges"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import networkx as nx
import numpy as np

from ..exceptions import UnknownNodeError
from .node import MapNode, NodeKind, Rect


@dataclass(frozen=True)
class MapMeta:
    descriptor_dim: int
    resolution: float
    frame: str = "map"


@dataclass(eq=False)
class FhtMap:
    meta: MapMeta
    nodes: list[MapNode] = field(default_factory=list)
    edges: set[tuple[int, int]] = field(default_factory=set)

    def __len__(self):
        return len(self.nodes)

    @property
    def is_empty(self) -> bool:
        return not self.nodes

    def node(self, node_id: int) -> MapNode:
        if not isinstance(node_id, (int, np.integer)) or not 0 <= node_id < len(self.nodes):
            raise UnknownNodeError(f"no node with id {node_id}")
        return self.nodes[node_id]

    def add_node(self, kind: NodeKind, position, free_rect: Rect, descriptor=None,
                 scan=None, entropy=None) -> MapNode:
        node = MapNode(len(self.nodes), kind, position, free_rect, descriptor, scan, entropy)
        self.nodes.append(node)
        return node

    def add_edge(self, a: int, b: int) -> bool:
        """Insert the unordered edge {a, b}; False if it already existed"""
        self.node(a)
        self.node(b)
        if a == b:
            raise ValueError(f"self-loop on node {a}")
        key = (min(a, b), max(a, b))
        if key in self.edges:
            return False
        self.edges.add(key)
        return True

    def has_edge(self, a: int, b: int) -> bool:
        return (min(a, b), max(a, b)) in self.edges

    def main_nodes(self) -> list[MapNode]:
        return [n for n in self.nodes if n.kind is NodeKind.MAIN]

    def support_nodes(self) -> list[MapNode]:
        return [n for n in self.nodes if n.kind is NodeKind.SUPPORT]

    def positions(self) -> np.ndarray:
        if not self.nodes:
            return np.empty((0, 2))
        return np.array([n.position for n in self.nodes], dtype=float)

    def edge_length(self, a: int, b: int) -> float:
        return math.dist(self.node(a).position, self.node(b).position)

    def sorted_edges(self) -> list[tuple[int, int]]:
        return sorted(self.edges)

    def to_networkx(self) -> nx.Graph:
        graph = nx.Graph()
        graph.add_nodes_from(n.id for n in self.nodes)
        graph.add_weighted_edges_from((a, b, self.edge_length(a, b)) for a, b in self.sorted_edges())
        return graph

    def is_connected(self) -> bool:
        if len(self.nodes) <= 1:
            return True
        return nx.is_connected(self.to_networkx())

    def counts(self) -> dict:
        return {
            "main": len(self.main_nodes()),
            "support": len(self.support_nodes()),
            "edges": len(self.edges),
        }
