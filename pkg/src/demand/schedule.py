"""
Schedule conflict resolution within one person's day.

Mandatory activities are placed first and keep their windows (an overlap
between two mandatory activities moves the later one to the end of the
earlier). Flexible activities are then placed in (start, id) order, each
by the first rule that works:

1. keep its planned window
2. shift to the earliest free start at or after the planned start where the
   full duration fits before ``latest_end``
3. shorten at the earliest free start where at least ``min_duration`` fits,
   keeping all the free room there (up to the next block or ``latest_end``)
4. drop

Intervals are half-open, so back-to-back activities do not overlap.
"""

import logging
import math
from dataclasses import replace
from typing import List, Optional, Sequence, Tuple

from .activities import Activity

logger = logging.getLogger('demand.schedule')

Block = Tuple[float, float]


def _free(blocks: Sequence[Block], start: float, end: float) -> bool:
    return all(end <= s or start >= e for s, e in blocks)


def _inside(blocks: Sequence[Block], t: float) -> bool:
    return any(s <= t < e for s, e in blocks)


def _next_block_start(blocks: Sequence[Block], t: float) -> float:
    return min((s for s, _ in blocks if s >= t), default=math.inf)


def _candidates(blocks: Sequence[Block], start: float) -> List[float]:
    return sorted({start} | {e for _, e in blocks if e >= start})


def place_flexible(activity: Activity, blocks: Sequence[Block]) -> Optional[Activity]:
    """The placed activity, or ``None`` when it cannot fit."""
    s, d = activity.planned_start, activity.planned_duration
    if _free(blocks, s, s + d):
        return activity
    candidates = _candidates(blocks, s)
    for c in candidates:
        if c + d <= activity.latest_end and _free(blocks, c, c + d):
            return replace(activity, planned_start=c)
    for c in candidates:
        if _inside(blocks, c):
            continue
        room = min(_next_block_start(blocks, c), activity.latest_end) - c
        if room >= activity.min_duration:
            return replace(activity, planned_start=c, planned_duration=room)
    return None


def resolve_conflicts(schedule: Sequence[Activity]) -> List[Activity]:
    """Time-ordered, non-overlapping schedule; mandatory activities are never dropped."""
    placed: List[Activity] = []
    blocks: List[Block] = []
    for act in sorted((a for a in schedule if a.is_mandatory), key=lambda a: (a.planned_start, a.id)):
        if blocks and act.planned_start < blocks[-1][1]:
            start = blocks[-1][1]
            act = replace(act, planned_start=start,
                          latest_end=max(act.latest_end, start + act.planned_duration))
        placed.append(act)
        blocks.append((act.planned_start, act.planned_end))

    dropped = 0
    for act in sorted((a for a in schedule if not a.is_mandatory), key=lambda a: (a.planned_start, a.id)):
        result = place_flexible(act, blocks)
        if result is None:
            dropped += 1
            continue
        placed.append(result)
        blocks.append((result.planned_start, result.planned_end))
    if dropped:
        logger.debug(f"Dropped {dropped} flexible activities while resolving conflicts")
    return sorted(placed, key=lambda a: (a.planned_start, a.id))
