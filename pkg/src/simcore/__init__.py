"""
Simcore Package
===============

One simulated day of traffic, transit service and traveler replanning.

Modules:
-------
- traffic.py: TrafficModel (vehicle movement, link transfer, link time records)
- transit.py: serve_stop, stop queues and transit vehicle state
- replan.py: activity outcomes and the replanning ladder
- events.py: deterministic event queue
- day.py: DaySimulator / run_day

Usage:
------
    from simcore import SimulationParams, run_day

    result = run_day(graph, profile, travelers, seed=7, params=SimulationParams(dt=1.0))
"""

from .day import DayResult, DaySimulator, TravelerDay, TripAssignment, TripRecord, TripStatus, run_day
from .events import Event, EventKind, EventQueue
from .params import SimulationParams
from .replan import (ActivityOutcome, CancelReason, OutcomeStatus, cancel, cannot_fit, evaluate_arrival,
                     fastest_plan)
from .traffic import TrafficModel, VehicleState, check_cfl
from .transit import DwellOutcome, Passenger, StopQueues, TransitVehicleState, serve_stop

__all__ = [
    'ActivityOutcome',
    'CancelReason',
    'DayResult',
    'DaySimulator',
    'DwellOutcome',
    'Event',
    'EventKind',
    'EventQueue',
    'OutcomeStatus',
    'Passenger',
    'SimulationParams',
    'StopQueues',
    'TrafficModel',
    'TransitVehicleState',
    'TravelerDay',
    'TripAssignment',
    'TripRecord',
    'TripStatus',
    'VehicleState',
    'cancel',
    'cannot_fit',
    'check_cfl',
    'evaluate_arrival',
    'fastest_plan',
    'run_day',
    'serve_stop',
]
