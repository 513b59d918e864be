"""
Within-day replanning
=====================

Activity outcomes and the decisions a traveler takes when the day does not
go as planned.

Ladder:
-------
- en route: reroute when the prevailing times give a faster remaining path
  (driven from ``DaySimulator``)
- before departure: a predicted late arrival switches to the fastest
  available mode; a flexible activity that can no longer fit its minimum
  duration is cancelled before leaving
- on arrival: start = max(arrival, planned start); the full duration kept is
  completed (on time) or postponed (late); otherwise the activity is
  shortened when at least the minimum duration fits before its latest end,
  else cancelled (flexible) or compressed to its minimum (mandatory)
- cancellations are ``cascade`` when the preceding activity was cancelled,
  ``too_late`` otherwise; trips without any mode cancel as ``untravelable``
"""

from dataclasses import dataclass
from enum import Enum
from typing import Any, Dict, Iterable, Optional

from demand.activities import Activity
from router.plan import PERSON_MODES, Mode, TripPlan


class OutcomeStatus(str, Enum):
    COMPLETED = 'completed'
    SHORTENED = 'shortened'
    POSTPONED = 'postponed'
    CANCELLED = 'cancelled'


class CancelReason(str, Enum):
    NONE = 'none'
    UNTRAVELABLE = 'untravelable'
    TOO_LATE = 'too_late'
    CASCADE = 'cascade'


@dataclass(frozen=True)
class ActivityOutcome:
    activity_id: int
    person_id: int
    activity_type: str
    status: OutcomeStatus
    realized_start: Optional[float]
    realized_duration: float
    cancel_reason: CancelReason = CancelReason.NONE
    planned_start: float = 0.0
    planned_duration: float = 0.0
    location_zone: Optional[int] = None

    @property
    def cancelled(self) -> bool:
        return self.status == OutcomeStatus.CANCELLED

    @property
    def realized_end(self) -> Optional[float]:
        if self.realized_start is None:
            return None
        return self.realized_start + self.realized_duration

    def to_dict(self) -> Dict[str, Any]:
        return {
            'activity_id': self.activity_id,
            'person_id': self.person_id,
            'type': self.activity_type,
            'status': self.status.value,
            'cancel_reason': self.cancel_reason.value,
            'planned_start': self.planned_start,
            'planned_duration': self.planned_duration,
            'realized_start': self.realized_start,
            'realized_duration': self.realized_duration,
            'location_zone': self.location_zone,
        }


def _outcome(activity: Activity, status: OutcomeStatus, start: Optional[float], duration: float,
             reason: CancelReason = CancelReason.NONE) -> ActivityOutcome:
    return ActivityOutcome(activity.id, activity.person_id, activity.type.value, status, start, duration,
                           reason, activity.planned_start, activity.planned_duration, activity.location_zone)


def cancel_reason(previous_cancelled: bool) -> CancelReason:
    return CancelReason.CASCADE if previous_cancelled else CancelReason.TOO_LATE


def cancel(activity: Activity, reason: CancelReason) -> ActivityOutcome:
    return _outcome(activity, OutcomeStatus.CANCELLED, None, 0.0, reason)


def cannot_fit(activity: Activity, arrival: float) -> bool:
    """True for a flexible activity whose minimum duration no longer fits after ``arrival``."""
    if activity.is_mandatory:
        return False
    start = max(arrival, activity.planned_start)
    return activity.latest_end - start < activity.min_duration


def evaluate_arrival(activity: Activity, arrival: float, late_tolerance: float,
                     previous_cancelled: bool = False) -> ActivityOutcome:
    """Outcome of ``activity`` for a traveler reaching its location at ``arrival``."""
    start = max(arrival, activity.planned_start)
    planned = activity.planned_duration
    available = activity.latest_end - start
    if available >= planned:
        on_time = start <= activity.planned_start + late_tolerance
        return _outcome(activity, OutcomeStatus.COMPLETED if on_time else OutcomeStatus.POSTPONED, start, planned)
    if available >= activity.min_duration:
        return _outcome(activity, OutcomeStatus.SHORTENED, start, available)
    if not activity.is_mandatory:
        return cancel(activity, cancel_reason(previous_cancelled))
    if activity.min_duration >= planned:
        return _outcome(activity, OutcomeStatus.POSTPONED, start, planned)
    return _outcome(activity, OutcomeStatus.SHORTENED, start, activity.min_duration)


def fastest_plan(router, modes: Iterable[Mode], origin: int, destination: int, departure: float,
                 person_id: Optional[int] = None, activity_id: Optional[int] = None,
                 prefer: Optional[Mode] = None) -> Optional[TripPlan]:
    """
    Fastest plan over ``modes`` (``router`` is a ``TripRouter``); ``prefer``
    wins ties. ``None`` when no mode reaches the destination.
    """
    best: Optional[TripPlan] = None
    allowed = set(modes)
    order = ([prefer] if prefer in allowed else []) + [m for m in PERSON_MODES if m in allowed and m != prefer]
    for mode in order:
        if mode.is_transit and not router.graph.has_transit:
            continue
        plan = router.route(mode, origin, destination, departure, person_id, activity_id)
        if plan is not None and (best is None or plan.predicted_total < best.predicted_total):
            best = plan
    return best
