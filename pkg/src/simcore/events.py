"""
Event queue of the day simulation: a heap ordered by (time, kind, entity id, sequence).
"""

import heapq
import itertools
from dataclasses import dataclass, field
from enum import IntEnum
from typing import Any, List, Optional


class EventKind(IntEnum):
    # lower value is handled first at equal time
    TRANSIT_SERVE = 0
    BUS_RELEASE = 1
    LEG_DONE = 2
    GIVE_UP = 3
    DEPART = 4
    TRUCK_DEPART = 5


@dataclass(order=True)
class Event:
    time: float
    kind: EventKind
    entity: int
    seq: int
    payload: Any = field(default=None, compare=False)


class EventQueue:
    """Deterministic priority queue; events at equal times are ordered by kind then entity id."""

    def __init__(self):
        self._heap: List[Event] = []
        self._seq = itertools.count()

    def push(self, time: float, kind: EventKind, entity: int, payload: Any = None) -> Event:
        event = Event(float(time), kind, int(entity), next(self._seq), payload)
        heapq.heappush(self._heap, event)
        return event

    def pop(self) -> Event:
        return heapq.heappop(self._heap)

    def peek_time(self) -> Optional[float]:
        return self._heap[0].time if self._heap else None

    def pop_until(self, t: float) -> List[Event]:
        """Pop every event with time <= t (callers that push during handling should loop)."""
        out = []
        while self._heap and self._heap[0].time <= t:
            out.append(heapq.heappop(self._heap))
        return out

    def __len__(self) -> int:
        return len(self._heap)

    def __bool__(self) -> bool:
        return bool(self._heap)
