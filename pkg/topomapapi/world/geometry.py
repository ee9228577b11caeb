"""SE(2) poses and rigid transforms"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np


def wrap_angle(theta: float) -> float:
    """Normalize an angle to (-pi, pi]"""
    wrapped = math.remainder(float(theta), 2.0 * math.pi)
    if wrapped <= -math.pi:
        wrapped += 2.0 * math.pi
    return wrapped


@dataclass(frozen=True)
class Pose2:
    """Robot pose in a planar frame. Heading is kept in (-pi, pi]."""

    x: float
    y: float
    theta: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "x", float(self.x))
        object.__setattr__(self, "y", float(self.y))
        object.__setattr__(self, "theta", wrap_angle(self.theta))

    @property
    def position(self) -> tuple[float, float]:
        return (self.x, self.y)

    def distance_to(self, other) -> float:
        ox, oy = other.position if isinstance(other, Pose2) else other
        return math.hypot(self.x - ox, self.y - oy)

    def as_transform(self) -> Transform2:
        return Transform2(self.x, self.y, self.theta)


@dataclass(frozen=True)
class Transform2:
    """Rigid transform in SE(2): rotate by theta, then translate by (x, y)"""

    x: float = 0.0
    y: float = 0.0
    theta: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "x", float(self.x))
        object.__setattr__(self, "y", float(self.y))
        object.__setattr__(self, "theta", wrap_angle(self.theta))

    @classmethod
    def identity(cls) -> Transform2:
        return cls(0.0, 0.0, 0.0)

    @classmethod
    def from_matrix(cls, matrix) -> Transform2:
        matrix = np.asarray(matrix, dtype=float)
        return cls(matrix[0, 2], matrix[1, 2], math.atan2(matrix[1, 0], matrix[0, 0]))

    @property
    def translation(self) -> tuple[float, float]:
        return (self.x, self.y)

    @property
    def rotation(self) -> float:
        return self.theta

    def as_matrix(self) -> np.ndarray:
        c, s = math.cos(self.theta), math.sin(self.theta)
        return np.array([[c, -s, self.x], [s, c, self.y], [0.0, 0.0, 1.0]])

    def compose(self, other: Transform2) -> Transform2:
        """self * other"""
        c, s = math.cos(self.theta), math.sin(self.theta)
        return Transform2(
            self.x + c * other.x - s * other.y,
            self.y + s * other.x + c * other.y,
            self.theta + other.theta,
        )

    def __matmul__(self, other):
        if isinstance(other, Transform2):
            return self.compose(other)
        if isinstance(other, Pose2):
            return self.compose(other.as_transform()).as_pose()
        return NotImplemented

    def inverse(self) -> Transform2:
        c, s = math.cos(self.theta), math.sin(self.theta)
        return Transform2(-(c * self.x + s * self.y), s * self.x - c * self.y, -self.theta)

    def apply(self, points):
        """Map points (N x 2 array or a single (x, y)) through the transform"""
        pts = np.asarray(points, dtype=float)
        c, s = math.cos(self.theta), math.sin(self.theta)
        rotation = np.array([[c, -s], [s, c]])
        moved = pts @ rotation.T + np.array([self.x, self.y])
        if pts.ndim == 1:
            return (float(moved[0]), float(moved[1]))
        return moved

    def as_pose(self) -> Pose2:
        return Pose2(self.x, self.y, self.theta)

    def residual(self, other: Transform2) -> tuple[float, float, float]:
        """Component residual self - other with a wrapped angle"""
        return (self.x - other.x, self.y - other.y, wrap_angle(self.theta - other.theta))

    def is_close(self, other: Transform2, tol: float = 1e-9) -> bool:
        dx, dy, dtheta = self.residual(other)
        return abs(dx) <= tol and abs(dy) <= tol and abs(dtheta) <= tol
