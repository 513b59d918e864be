"""
Trip chains: home -> activity -> ... -> home, with an intermediate return
home when the gap between two activities exceeds ``return_home_gap``.
"""

from dataclasses import dataclass
from typing import List, Optional, Sequence

from .activities import Activity

HOME = 'home'


@dataclass(frozen=True)
class PlannedTrip:
    """
    One leg of a person's day. Trips to an activity carry its id and must
    arrive by ``arrive_by``; home trips leave at ``depart_after``.
    """
    person_id: int
    index: int
    origin_zone: int
    destination_zone: int
    purpose: str
    activity_id: Optional[int] = None
    arrive_by: Optional[float] = None
    depart_after: Optional[float] = None
    previous_activity_id: Optional[int] = None

    @property
    def is_home(self) -> bool:
        return self.activity_id is None


def build_trip_chain(person_id: int, activities: Sequence[Activity], home_zone: int,
                     return_home_gap: float = 7200.0) -> List[PlannedTrip]:
    """Trips for a resolved, located, time-ordered activity list."""
    trips: List[PlannedTrip] = []
    zone = home_zone
    previous: Optional[Activity] = None

    def add(**kw):
        trips.append(PlannedTrip(person_id=person_id, index=len(trips), **kw))

    for act in activities:
        if act.location_zone is None:
            raise ValueError(f"activity {act.id} has no location")
        if previous is not None and act.planned_start - previous.planned_end > return_home_gap and zone != home_zone:
            add(origin_zone=zone, destination_zone=home_zone, purpose=HOME,
                depart_after=previous.planned_end, previous_activity_id=previous.id)
            zone = home_zone
        add(origin_zone=zone, destination_zone=act.location_zone, purpose=act.type.value,
            activity_id=act.id, arrive_by=act.planned_start,
            previous_activity_id=previous.id if previous is not None else None)
        zone = act.location_zone
        previous = act
    if previous is not None:
        add(origin_zone=zone, destination_zone=home_zone, purpose=HOME,
            depart_after=previous.planned_end, previous_activity_id=previous.id)
    return trips

