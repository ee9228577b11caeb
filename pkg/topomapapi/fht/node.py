"""Map nodes and their free-space rectangles"""
from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Optional

from ..exceptions import NodeKindError
from ..world.descriptor import Descriptor
from ..world.raycast import LaserScan


class NodeKind(str, Enum):
    MAIN = "main"
    SUPPORT = "support"


@dataclass(frozen=True)
class Rect:
    """Axis-aligned rectangle [xmin, xmax] x [ymin, ymax] in the map frame"""

    xmin: float
    ymin: float
    xmax: float
    ymax: float

    @classmethod
    def around(cls, position, size: float) -> Rect:
        x, y = position
        half = size / 2.0
        return cls(x - half, y - half, x + half, y + half)

    @property
    def area(self) -> float:
        return (self.xmax - self.xmin) * (self.ymax - self.ymin)

    def contains(self, point) -> bool:
        x, y = point
        return self.xmin <= x <= self.xmax and self.ymin <= y <= self.ymax

    def as_list(self) -> list[float]:
        return [self.xmin, self.ymin, self.xmax, self.ymax]


@dataclass(eq=False)
class MapNode:
    """A vertex of the map. Main nodes carry a descriptor, a heading-0 laser
    scan and the descriptor's entropy; support nodes carry none of the three.
    """

    id: int
    kind: NodeKind
    position: tuple[float, float]
    free_rect: Rect
    descriptor: Optional[Descriptor] = None
    scan: Optional[LaserScan] = None
    entropy: Optional[float] = None

    def __post_init__(self):
        self.kind = NodeKind(self.kind)
        self.position = (float(self.position[0]), float(self.position[1]))
        sensed = (self.descriptor, self.scan, self.entropy)
        if self.kind is NodeKind.SUPPORT and any(v is not None for v in sensed):
            raise NodeKindError(f"support node {self.id} cannot hold descriptor, scan or entropy")
        if self.kind is NodeKind.MAIN and any(v is None for v in sensed):
            raise NodeKindError(f"main node {self.id} needs descriptor, scan and entropy")

    @property
    def is_main(self) -> bool:
        return self.kind is NodeKind.MAIN

    def __repr__(self):
        return f"MapNode({self.id}, {self.kind.value}, ({self.position[0]:.2f}, {self.position[1]:.2f}))"
