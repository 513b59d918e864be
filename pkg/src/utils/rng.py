"""
Seeded random substreams.

Every stochastic draw in the pipeline comes from a generator keyed by
``(seed, tag, *ids)`` so results do not depend on processing order or on
the number of workers.
"""

import zlib
from typing import Union

import numpy as np

STREAM_TAGS = {
    'population': 11,
    'activities': 12,
    'destination': 13,
    'mode': 14,
    'trucks': 15,
    'joint': 16,
    'toycity': 17,
}


def _tag_value(tag: Union[str, int]) -> int:
    if isinstance(tag, int):
        return tag
    if tag in STREAM_TAGS:
        return STREAM_TAGS[tag]
    return zlib.crc32(tag.encode('utf-8'))


def substream(seed: int, tag: Union[str, int], *ids: int) -> np.random.Generator:
    """Independent generator for ``(seed, tag, *ids)``; ids must be non-negative ints."""
    entropy = [int(seed), _tag_value(tag)] + [int(i) for i in ids]
    return np.random.default_rng(np.random.SeedSequence(entropy))
