"""Deterministic random-stream derivation.

Every random decision in the simulator draws from a substream keyed by
(master_seed, drop_index, purpose tag).  Substreams are independent, so
drops can be generated in any order (or in parallel) and UAV-related
randomness never shifts when the terrestrial UE count changes.
"""

from enum import IntEnum

import numpy as np


class Stream(IntEnum):
    """Purpose tags for per-drop substreams."""

    UE_POSITION = 1
    UAV_POSITION = 2
    UE_BS_LOS = 3
    UE_BS_SHADOW = 4
    UE_BS_FADE = 5
    UAV_BS_LOS = 6
    UAV_BS_SHADOW = 7
    UAV_BS_FADE = 8
    UAV_BS_PHASE = 9
    UE_UAV_LOS = 10
    UE_UAV_SHADOW = 11
    UE_UAV_FADE = 12
    UE_UAV_PHASE = 13
    ALLOC_UAV_RESERVED = 14
    ALLOC_TERRESTRIAL = 15
    ALLOC_UAV_SHARED = 16


def substream(master_seed: int, drop_index: int, tag: int) -> np.random.Generator:
    """Generator for one (drop, purpose) pair, a pure function of its arguments."""
    seq = np.random.SeedSequence(entropy=(int(master_seed), int(drop_index), int(tag)))
    return np.random.Generator(np.random.PCG64(seq))
