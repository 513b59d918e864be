"""
Trip plans: ordered legs contiguous in space and time.
"""

from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Dict, List, Optional, Tuple

from .params import RouterParams


class Mode(str, Enum):
    """Travel modes a trip can use."""
    DRIVE = 'drive'
    WALK = 'walk'
    BIKE = 'bike'
    WALK_TO_TRANSIT = 'walk_to_transit'
    DRIVE_TO_TRANSIT = 'drive_to_transit'
    TRUCK = 'truck'

    @property
    def is_transit(self) -> bool:
        return self in (Mode.WALK_TO_TRANSIT, Mode.DRIVE_TO_TRANSIT)

    @property
    def uses_car(self) -> bool:
        return self in (Mode.DRIVE, Mode.DRIVE_TO_TRANSIT)


PERSON_MODES: Tuple[Mode, ...] = (
    Mode.DRIVE, Mode.WALK_TO_TRANSIT, Mode.DRIVE_TO_TRANSIT, Mode.WALK, Mode.BIKE,
)


class LegKind(str, Enum):
    DRIVE = 'drive'
    WALK = 'walk'
    BIKE = 'bike'
    BOARD = 'board'
    RIDE = 'ride'
    ALIGHT = 'alight'
    WAIT = 'wait'
    PARK = 'park'


IN_VEHICLE_KINDS = frozenset({LegKind.DRIVE, LegKind.BIKE, LegKind.RIDE})
WALK_KINDS = frozenset({LegKind.WALK, LegKind.PARK})


@dataclass(frozen=True)
class Leg:
    """
    One step of a plan. Places are ``n:<node>`` or ``s:<stop>``.

    Transit legs carry the pattern, trip index and stop indices they use.
    """
    kind: LegKind
    start: float
    duration: float
    from_place: str
    to_place: str
    link_id: Optional[int] = None
    pattern_id: Optional[str] = None
    trip_index: Optional[int] = None
    stop_index: Optional[int] = None
    to_stop_index: Optional[int] = None
    distance: float = 0.0

    @property
    def end(self) -> float:
        return self.start + self.duration

    def to_dict(self) -> Dict[str, Any]:
        out: Dict[str, Any] = {'kind': self.kind.value, 'start': self.start, 'duration': self.duration,
                               'from': self.from_place, 'to': self.to_place}
        for key in ('link_id', 'pattern_id', 'trip_index', 'stop_index', 'to_stop_index'):
            value = getattr(self, key)
            if value is not None:
                out[key] = value
        return out


@dataclass(frozen=True)
class TripPlan:
    """Routed trip; ``predicted_total`` is the sum of leg durations."""
    mode: Mode
    departure: float
    legs: Tuple[Leg, ...]
    origin_node: int
    destination_node: int
    person_id: Optional[int] = None
    activity_id: Optional[int] = None
    generalized_cost: float = field(default=0.0, compare=False)

    @property
    def predicted_total(self) -> float:
        return sum(leg.duration for leg in self.legs)

    @property
    def arrival(self) -> float:
        return self.departure + self.predicted_total

    def _sum(self, kinds) -> float:
        return sum(leg.duration for leg in self.legs if leg.kind in kinds)

    @property
    def in_vehicle_time(self) -> float:
        return self._sum(IN_VEHICLE_KINDS)

    @property
    def wait_time(self) -> float:
        return self._sum((LegKind.WAIT,))

    @property
    def walk_time(self) -> float:
        return self._sum(WALK_KINDS)

    @property
    def distance(self) -> float:
        return sum(leg.distance for leg in self.legs)

    @property
    def drive_distance(self) -> float:
        return sum(leg.distance for leg in self.legs if leg.kind == LegKind.DRIVE)

    @property
    def boardings(self) -> int:
        return sum(1 for leg in self.legs if leg.kind == LegKind.BOARD)

    def link_ids(self) -> List[int]:
        """Road links driven, in order."""
        return [leg.link_id for leg in self.legs if leg.kind == LegKind.DRIVE and leg.link_id is not None]

    def to_dict(self) -> Dict[str, Any]:
        return {
            'person_id': self.person_id,
            'activity_id': self.activity_id,
            'mode': self.mode.value,
            'departure': self.departure,
            'origin_node': self.origin_node,
            'destination_node': self.destination_node,
            'predicted_total': self.predicted_total,
            'generalized_cost': self.generalized_cost,
            'legs': [leg.to_dict() for leg in self.legs],
        }


def generalized_cost(legs, params: RouterParams) -> float:
    ivt = sum(leg.duration for leg in legs if leg.kind in IN_VEHICLE_KINDS)
    wait = sum(leg.duration for leg in legs if leg.kind == LegKind.WAIT)
    walk = sum(leg.duration for leg in legs if leg.kind in WALK_KINDS)
    return params.ivt_weight * ivt + params.wait_weight * wait + params.walk_weight * walk


def make_plan(mode: Mode, departure: float, legs, origin: int, destination: int,
              params: RouterParams, person_id: Optional[int] = None,
              activity_id: Optional[int] = None) -> TripPlan:
    legs = tuple(legs)
    return TripPlan(mode=mode, departure=departure, legs=legs, origin_node=origin,
                    destination_node=destination, person_id=person_id, activity_id=activity_id,
                    generalized_cost=generalized_cost(legs, params))
