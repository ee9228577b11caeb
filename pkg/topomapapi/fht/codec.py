"""Versioned JSON encoding of maps.

Layout::

    {"version": 1,
     "meta": {"descriptor_dim", "resolution", "frame"},
     "nodes": [{"id", "kind", "position": [x, y], "rect": [xmin, ymin, xmax, ymax],
                "entropy"?, "descriptor"?: [...], "scan"?: {"max_range", "ranges": [...]}}],
     "edges": [[i, j], ...]}

Support nodes have no entropy, descriptor or scan keys. Real numbers are
written as the shortest decimal that reads back to the same binary32 value,
and a beam without a return is written as 0.
"""
from __future__ import annotations

import json

import numpy as np

from ..exceptions import MapFormatError, TopoMapError
from ..world.descriptor import Descriptor
from ..world.raycast import NO_RETURN, LaserScan
from .graph import FhtMap, MapMeta
from .node import NodeKind, Rect

VERSION = 1


def f32(value) -> float:
    return float(str(np.float32(value)))


def f32_list(values) -> list[float]:
    return [float(str(v)) for v in np.asarray(values, dtype=np.float32)]


def encode(fht_map: FhtMap) -> dict:
    nodes = []
    for node in fht_map.nodes:
        entry = {
            "id": node.id,
            "kind": node.kind.value,
            "position": f32_list(node.position),
            "rect": f32_list(node.free_rect.as_list()),
        }
        if node.is_main:
            ranges = np.where(node.scan.valid, node.scan.ranges, 0.0)
            entry["entropy"] = f32(node.entropy)
            entry["descriptor"] = f32_list(node.descriptor.values)
            entry["scan"] = {"max_range": f32(node.scan.max_range), "ranges": f32_list(ranges)}
        nodes.append(entry)
    return {
        "version": VERSION,
        "meta": {
            "descriptor_dim": fht_map.meta.descriptor_dim,
            "resolution": f32(fht_map.meta.resolution),
            "frame": fht_map.meta.frame,
        },
        "nodes": nodes,
        "edges": [list(edge) for edge in fht_map.sorted_edges()],
    }


def serialize(fht_map: FhtMap) -> bytes:
    return json.dumps(encode(fht_map), separators=(",", ":")).encode("utf-8")


def storage_bytes(fht_map: FhtMap) -> int:
    return len(serialize(fht_map))


def _decode_scan(data) -> LaserScan:
    ranges = np.asarray(data["ranges"], dtype=np.float32).astype(float)
    ranges[ranges <= 0.0] = NO_RETURN
    return LaserScan.uniform(ranges, float(np.float32(data["max_range"])))


def decode(doc: dict) -> FhtMap:
    if not isinstance(doc, dict):
        raise MapFormatError("map document must be a JSON object")
    version = doc.get("version")
    if version != VERSION:
        raise MapFormatError(f"unsupported map version {version!r}, expected {VERSION}")
    try:
        meta = doc["meta"]
        fht_map = FhtMap(MapMeta(int(meta["descriptor_dim"]), float(meta["resolution"]),
                                 str(meta.get("frame", "map"))))
        for index, entry in enumerate(doc["nodes"]):
            if entry["id"] != index:
                raise MapFormatError(f"node ids must run 0..N-1, found {entry['id']} at {index}")
            kind = NodeKind(entry["kind"])
            position = tuple(np.asarray(entry["position"], dtype=np.float32).astype(float))
            rect = Rect(*np.asarray(entry["rect"], dtype=np.float32).astype(float))
            if kind is NodeKind.MAIN:
                fht_map.add_node(
                    kind, position, rect,
                    Descriptor(np.asarray(entry["descriptor"], dtype=np.float32).astype(float)),
                    _decode_scan(entry["scan"]),
                    float(np.float32(entry["entropy"])))
            else:
                extra = {"entropy", "descriptor", "scan"} & set(entry)
                if extra:
                    raise MapFormatError(f"support node {index} carries {', '.join(sorted(extra))}")
                fht_map.add_node(kind, position, rect)
        for a, b in doc["edges"]:
            fht_map.add_edge(int(a), int(b))
    except MapFormatError:
        raise
    except (KeyError, TypeError, ValueError, TopoMapError) as ex:
        raise MapFormatError(f"malformed map: {ex}") from ex
    return fht_map


def deserialize(data) -> FhtMap:
    if isinstance(data, (bytes, bytearray)):
        try:
            data = data.decode("utf-8")
        except UnicodeDecodeError as ex:
            raise MapFormatError(f"map is not UTF-8 text: {ex}") from ex
    try:
        doc = json.loads(data)
    except json.JSONDecodeError as ex:
        raise MapFormatError(f"truncated or malformed map JSON: {ex}") from ex
    return decode(doc)


def structurally_equal(a: FhtMap, b: FhtMap) -> bool:
    """Equality up to the binary32 precision the encoding keeps"""
    return encode(a) == encode(b)
