"""
Transit service at stops: alighting, FIFO boarding up to crush capacity,
seating, denied boarding and dwell times.

Waiting passengers are queued per (pattern id, stop index). A passenger who
gives up is marked inactive and skipped when the queue is served.
"""

from collections import deque
from dataclasses import dataclass, field
from typing import Any, Deque, Dict, List, Tuple

from network.model import TransitPattern

from .params import SimulationParams


@dataclass(eq=False)
class Passenger:
    person_id: int
    alight_index: int
    joined: float
    active: bool = True
    boarded_at: float = -1.0


@dataclass
class TransitVehicleState:
    """One scheduled trip of a pattern in service."""
    run_id: int
    pattern: TransitPattern
    trip_index: int
    next_stop: int = 0
    onboard: List[Passenger] = field(default_factory=list)
    boardings: int = 0
    alightings: int = 0
    max_load: int = 0

    @property
    def seated(self) -> int:
        return min(self.pattern.seat_capacity, len(self.onboard))

    @property
    def standing(self) -> int:
        return len(self.onboard) - self.seated

    @property
    def remaining_capacity(self) -> int:
        return self.pattern.crush_capacity - len(self.onboard)

    @property
    def finished(self) -> bool:
        return self.next_stop >= self.pattern.n_stops


@dataclass(frozen=True)
class DwellOutcome:
    alighted: Tuple[Passenger, ...]
    boarded: Tuple[Passenger, ...]
    denied: int
    dwell: float


def serve_stop(vehicle: TransitVehicleState, stop_index: int, waiting: Deque[Passenger], now: float,
               params: SimulationParams) -> DwellOutcome:
    """
    Serve stop ``stop_index``: everyone bound for it alights first, then the
    queue boards in arrival order until the vehicle is at crush capacity.
    Denied passengers stay queued for the next trip. Everyone still on board
    alights at the last stop.
    """
    last = stop_index == vehicle.pattern.n_stops - 1
    alighted = [p for p in vehicle.onboard if last or p.alight_index == stop_index]
    if alighted:
        gone = set(map(id, alighted))
        vehicle.onboard = [p for p in vehicle.onboard if id(p) not in gone]
    vehicle.alightings += len(alighted)

    boarded: List[Passenger] = []
    if not last:
        while waiting and vehicle.remaining_capacity > 0:
            p = waiting.popleft()
            if not p.active:
                continue
            p.active = False
            p.boarded_at = now
            vehicle.onboard.append(p)
            boarded.append(p)
    denied = sum(1 for p in waiting if p.active) if not last else 0
    vehicle.boardings += len(boarded)
    vehicle.max_load = max(vehicle.max_load, len(vehicle.onboard))
    vehicle.next_stop = stop_index + 1

    dwell = max(params.min_dwell, params.board_time * len(boarded) + params.alight_time * len(alighted))
    return DwellOutcome(tuple(alighted), tuple(boarded), denied, dwell)


class StopQueues:
    """Waiting passengers keyed by (pattern id, stop index)."""

    def __init__(self):
        self._queues: Dict[Tuple[str, int], Deque[Passenger]] = {}

    def queue(self, pattern_id: str, stop_index: int) -> Deque[Passenger]:
        return self._queues.setdefault((pattern_id, stop_index), deque())

    def join(self, pattern_id: str, stop_index: int, passenger: Passenger) -> None:
        self.queue(pattern_id, stop_index).append(passenger)

    def waiting(self) -> int:
        return sum(1 for q in self._queues.values() for p in q if p.active)

    def snapshot(self) -> Dict[Any, int]:
        return {k: sum(1 for p in q if p.active) for k, q in sorted(self._queues.items())
                if any(p.active for p in q)}
