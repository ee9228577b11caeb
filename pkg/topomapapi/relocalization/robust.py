"""Outlier rejection and robust averaging of map<-odom estimations"""
from __future__ import annotations

import logging
import math

import numpy as np

from ..world.geometry import Transform2, wrap_angle

logger = logging.getLogger(__name__)

TRANSLATION_SLACK = 0.2
ANGLE_SLACK = math.radians(2.0)
HUBER_DELTA = 0.5
CONSENSUS_TRANSLATION = 0.5
CONSENSUS_ANGLE = math.radians(5.0)


def _transform(item) -> Transform2:
    return item if isinstance(item, Transform2) else item.t_est


def _components(items) -> np.ndarray:
    return np.array([[t.x, t.y, t.theta] for t in map(_transform, items)], dtype=float)


def _angle_gap(a, b):
    return np.abs(np.arctan2(np.sin(a - b), np.cos(a - b)))


def circular_median(angles) -> float:
    """The sample angle with the smallest summed angular distance to the rest"""
    angles = np.asarray(angles, dtype=float)
    cost = _angle_gap(angles[:, None], angles[None, :]).sum(axis=1)
    return float(angles[int(np.argmin(cost))])


def reject_outliers(ests: list) -> list:
    """Drop estimations far from the median. Keeps input order and never
    returns an empty list.
    """
    if len(ests) <= 1:
        return list(ests)
    comps = _components(ests)
    center = np.median(comps[:, :2], axis=0)
    spread = np.hypot(*(comps[:, :2] - center).T)
    heading = circular_median(comps[:, 2])
    turn = _angle_gap(comps[:, 2], heading)
    keep = (spread <= 3.0 * np.median(spread) + TRANSLATION_SLACK) & \
           (turn <= 3.0 * np.median(turn) + ANGLE_SLACK)
    if not keep.any():
        keep[int(np.argmin(spread + turn))] = True
    dropped = len(ests) - int(keep.sum())
    if dropped:
        logger.debug("rejected %d of %d estimations", dropped, len(ests))
    return [e for e, k in zip(ests, keep) if k]


def consensus(ests: list, translation: float = CONSENSUS_TRANSLATION,
              angle: float = CONSENSUS_ANGLE) -> list:
    """Largest group of estimations within translation and angle of one of
    its members, in input order. Ties keep the group seeded earliest.

    Aliased places produce estimations that are each well aligned but spread
    over the map; only the true transform collects agreeing estimations.
    """
    if len(ests) <= 1:
        return list(ests)
    comps = _components(ests)
    near = (np.hypot(comps[:, None, 0] - comps[None, :, 0],
                     comps[:, None, 1] - comps[None, :, 1]) <= translation) & \
           (_angle_gap(comps[:, None, 2], comps[None, :, 2]) <= angle)
    seed = int(np.argmax(near.sum(axis=1)))
    return [e for e, k in zip(ests, near[seed]) if k]


def huber_weights(residuals: np.ndarray, delta: float) -> np.ndarray:
    magnitude = np.abs(residuals)
    return np.where(magnitude <= delta, 1.0, delta / np.maximum(magnitude, 1e-12))


def optimize_transform(ests: list, loss: str = "huber", delta: float = HUBER_DELTA,
                       tolerance: float = 1e-6, max_iterations: int = 50) -> Transform2:
    """Robust SE(2) average by iteratively reweighted least squares.

    Residuals are per component (dx, dy, wrapped dtheta). Translation is the
    weighted mean, rotation the weighted circular mean. ``loss="l2"`` keeps
    every weight at 1.

    The rotation step is a circular mean under Huber weights, not an exact
    Huber minimizer over theta: with headings spread over several tenths of a
    radian it can sit a few hundredths away from the true minimizer. For
    tightly grouped headings the two agree.
    """
    if not ests:
        raise ValueError("need at least one estimation")
    if loss not in ("huber", "l2"):
        raise ValueError(f"unknown loss {loss!r}")
    if len(ests) == 1:
        return _transform(ests[0])
    comps = _components(ests)
    xs, ys, thetas = comps[:, 0], comps[:, 1], comps[:, 2]
    weights = np.ones_like(comps)

    def solve(w):
        x = float((w[:, 0] * xs).sum() / w[:, 0].sum())
        y = float((w[:, 1] * ys).sum() / w[:, 1].sum())
        theta = math.atan2(float((w[:, 2] * np.sin(thetas)).sum()),
                           float((w[:, 2] * np.cos(thetas)).sum()))
        return x, y, theta

    x, y, theta = solve(weights)
    if loss == "huber":
        for _ in range(max_iterations):
            residuals = np.column_stack((xs - x, ys - y, np.arctan2(np.sin(thetas - theta),
                                                                    np.cos(thetas - theta))))
            updated = huber_weights(residuals, delta)
            change = float(np.abs(updated - weights).max())
            weights = updated
            x, y, theta = solve(weights)
            if change < tolerance:
                break
    return Transform2(x, y, wrap_angle(theta))
