"""Descriptor matching against the main nodes of a map"""
from __future__ import annotations

from typing import Optional

import numpy as np

from ..fht.graph import FhtMap
from ..world.descriptor import Descriptor


def match_descriptor(fht_map: FhtMap, query: Descriptor,
                     th_match: float = 0.85) -> Optional[tuple[int, float]]:
    """(node id, inner product) of the best matching main node, or None when
    the best score is below th_match. Equal scores go to the lower id.
    """
    mains = fht_map.main_nodes()
    if not mains:
        return None
    stored = np.array([n.descriptor.values for n in mains])
    scores = stored @ query.values
    best = int(np.argmax(scores))
    score = float(scores[best])
    if score < th_match:
        return None
    return mains[best].id, score
