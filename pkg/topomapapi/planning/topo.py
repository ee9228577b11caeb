"""Shortest routes on the topological graph"""
from __future__ import annotations

import math

import networkx as nx
import numpy as np

from ..fht.graph import FhtMap


def shortest_topo(fht_map: FhtMap, a: int, b: int) -> tuple[float, list[int]]:
    """Dijkstra with Euclidean edge lengths; (inf, []) when a and b are not connected"""
    fht_map.node(a)
    fht_map.node(b)
    if a == b:
        return 0.0, [a]
    try:
        distance, path = nx.single_source_dijkstra(fht_map.to_networkx(), a, b, weight="weight")
    except nx.NetworkXNoPath:
        return math.inf, []
    return float(distance), list(path)


def all_pairs_topo(fht_map: FhtMap):
    """Dense matrix of graph distances, inf between components"""
    n = len(fht_map)
    distances = np.full((n, n), np.inf)
    for source, lengths in nx.all_pairs_dijkstra_path_length(fht_map.to_networkx()):
        for target, length in lengths.items():
            distances[source, target] = length
    return distances
