"""Place descriptors.

A descriptor is a unit vector that depends only on where it was sensed,
never on the robot heading. The reference source histograms what a ring of
rays sees: how far the walls are and how they are textured.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Protocol

import numpy as np
from django.conf import settings
from django.utils.module_loading import import_string

from ..exceptions import ObstacleError
from .grid import CellState
from .raycast import trace_rays
from .worldfile import DEFAULT_TEXTURE

EPSILON = 1e-6


@dataclass(eq=False)
class Descriptor:
    values: np.ndarray

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=float)

    def __eq__(self, other):
        if not isinstance(other, Descriptor):
            return NotImplemented
        return np.array_equal(self.values, other.values)

    def __len__(self):
        return len(self.values)

    @property
    def dim(self) -> int:
        return len(self.values)

    def dot(self, other: Descriptor) -> float:
        return float(self.values @ other.values)

    @classmethod
    def normalized(cls, values) -> Descriptor:
        values = np.asarray(values, dtype=float)
        return cls(values / np.linalg.norm(values))


class DescriptorSource(Protocol):
    dim: int

    def __call__(self, world, position) -> Descriptor:
        ...


def sense_descriptor(world, position, max_range: float = 7.0, dim: int = 512) -> Descriptor:
    """Cast 4*dim rays over 360 degrees from position. Half the bins histogram
    the hit ranges (normalized by max_range), the other half the textures of
    the hit cells. Every bin gets EPSILON before L2 normalization.
    """
    if dim < 2 or dim % 2:
        raise ValueError("descriptor dimension must be even and at least 2")
    grid = world.truth
    x, y = position
    if grid.state_at(x, y) != CellState.FREE:
        raise ObstacleError(f"descriptor position ({x:.3f}, {y:.3f}) is not in free space")
    half = dim // 2
    angles = 2.0 * math.pi * np.arange(4 * dim) / (4 * dim)
    trace = trace_rays(grid.occupied_mask, grid.resolution, grid.origin.position,
                       (x, y), angles, max_range)
    hits = np.isfinite(trace.ranges)

    range_hist, _ = np.histogram(
        np.clip(trace.ranges[hits] / max_range, 0.0, 1.0), bins=half, range=(0.0, 1.0))

    rows, cols = trace.hit_rows[hits], trace.hit_cols[hits]
    textures = np.full(rows.shape, DEFAULT_TEXTURE)
    inside = rows >= 0
    textures[inside] = world.texture[rows[inside], cols[inside]]
    texture_hist, _ = np.histogram(textures, bins=half, range=(0.0, 1.0))

    values = np.concatenate((range_hist, texture_hist)).astype(float) + EPSILON
    return Descriptor.normalized(values)


class HistogramDescriptor:
    """Reference descriptor source bound to a sensing range and dimension"""

    def __init__(self, max_range: float = 7.0, dim: int = 512):
        self.max_range = max_range
        self.dim = dim

    def __call__(self, world, position) -> Descriptor:
        return sense_descriptor(world, position, self.max_range, self.dim)


def descriptor_source(max_range: float, dim: int) -> DescriptorSource:
    """Build the descriptor source named in settings.TOPOMAP['DESCRIPTOR']"""
    source_class = import_string(settings.TOPOMAP["DESCRIPTOR"])
    return source_class(max_range=max_range, dim=dim)
