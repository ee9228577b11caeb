"""Descriptor entropy and relocalization capability"""
from __future__ import annotations

import numpy as np

from ..world.descriptor import Descriptor
from .graph import FhtMap


def entropy(d: Descriptor, n_bins: int = 10) -> float:
    """Shannon entropy (nats) of the histogram of descriptor components over
    n_bins equal sub-intervals of [0, 1]. Components are clamped into [0, 1].
    """
    if n_bins < 2:
        raise ValueError("n_bins must be at least 2")
    values = np.clip(np.asarray(d.values if isinstance(d, Descriptor) else d, dtype=float), 0.0, 1.0)
    if values.size == 0:
        return 0.0
    bins = np.minimum(np.floor(values * n_bins).astype(np.int64), n_bins - 1)
    p = np.bincount(bins, minlength=n_bins) / values.size
    p = p[p > 0]
    return float(-(p * np.log(p)).sum())


def reloc_capability(fht_map: FhtMap, q, sigma_c: float) -> float:
    """Entropy-weighted Gaussian sum over the main nodes around q"""
    if not sigma_c > 0:
        raise ValueError("sigma_c must be positive")
    mains = fht_map.main_nodes()
    if not mains:
        return 0.0
    positions = np.array([n.position for n in mains])
    weights = np.array([n.entropy for n in mains])
    sq = ((positions - np.asarray(q, dtype=float)) ** 2).sum(axis=1)
    return float((weights * np.exp(-sq / sigma_c ** 2)).sum())
