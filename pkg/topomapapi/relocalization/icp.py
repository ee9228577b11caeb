"""Global 2D scan alignment.

Point-to-point ICP started from a ring of rotation seeds, each with the
translation that lines up the two centroids. The inlier gate starts wide and
tightens with the fit.
"""
from __future__ import annotations

import logging
import math

import numpy as np
from scipy.spatial import cKDTree

from ..exceptions import AlignmentError, InsufficientOverlapError
from ..world.geometry import Transform2
from ..world.raycast import LaserScan

logger = logging.getLogger(__name__)

MIN_POINTS = 10
START_GATE = 1.0
MIN_GATE = 0.1
SCORE_GATE = 0.3
MIN_INLIER_FRACTION = 0.5


def rotation(theta: float) -> np.ndarray:
    c, s = math.cos(theta), math.sin(theta)
    return np.array([[c, -s], [s, c]])


def kabsch(source: np.ndarray, target: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Rotation R and translation t minimizing sum |R source + t - target|^2"""
    source_mean = source.mean(axis=0)
    target_mean = target.mean(axis=0)
    h = (source - source_mean).T @ (target - target_mean)
    u, _, vt = np.linalg.svd(h)
    r = vt.T @ u.T
    if np.linalg.det(r) < 0:
        vt[-1, :] *= -1
        r = vt.T @ u.T
    return r, target_mean - r @ source_mean


def icp(tree: cKDTree, target: np.ndarray, points: np.ndarray, r: np.ndarray, t: np.ndarray,
        max_iterations: int = 50, tolerance: float = 1e-6):
    gate = START_GATE
    for _ in range(max_iterations):
        moved = points @ r.T + t
        distances, index = tree.query(moved)
        inliers = distances < gate
        if np.count_nonzero(inliers) < 3:
            break
        new_r, new_t = kabsch(points[inliers], target[index[inliers]])
        rms = math.sqrt(float(np.mean(distances[inliers] ** 2)))
        gate = max(MIN_GATE, 3.0 * rms)
        change = np.abs(new_r - r).max() + np.abs(new_t - t).max()
        r, t = new_r, new_t
        if change < tolerance:
            break
    return r, t


def score(tree: cKDTree, points: np.ndarray, r: np.ndarray, t: np.ndarray):
    distances, _ = tree.query(points @ r.T + t)
    inliers = distances < SCORE_GATE
    fraction = np.count_nonzero(inliers) / len(points)
    if not inliers.any():
        return math.inf, 0.0
    return math.sqrt(float(np.mean(distances[inliers] ** 2))), fraction


def global_icp(reference: LaserScan, current: LaserScan, n_seeds: int = 36,
               rms_accept: float = 0.2) -> tuple[Transform2, float]:
    """Transform taking current-frame points into the reference frame, and
    its inlier RMS. Seeds are the rotations -pi + 2*pi*(k + 1) / n_seeds.
    """
    target = reference.points()
    points = current.points()
    if len(target) < MIN_POINTS or len(points) < MIN_POINTS:
        raise InsufficientOverlapError(
            f"need {MIN_POINTS} returns in both scans, have {len(target)} and {len(points)}")
    tree = cKDTree(target)
    target_mean = target.mean(axis=0)
    points_mean = points.mean(axis=0)

    best = None
    for k in range(n_seeds):
        theta = -math.pi + 2.0 * math.pi * (k + 1) / n_seeds
        r0 = rotation(theta)
        r, t = icp(tree, target, points, r0, target_mean - r0 @ points_mean)
        rms, fraction = score(tree, points, r, t)
        if fraction < MIN_INLIER_FRACTION:
            continue
        if best is None or rms < best[0]:
            best = (rms, r, t)
    if best is None or best[0] >= rms_accept:
        found = "no candidate" if best is None else f"best rms {best[0]:.3f} m"
        raise AlignmentError(f"scan alignment failed: {found}")
    rms, r, t = best
    return Transform2(t[0], t[1], math.atan2(r[1, 0], r[0, 0])), rms
