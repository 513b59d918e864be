"""
Day Simulator
=============

One simulated day: travelers execute their trip chains on the traffic model
and the transit service, replanning when the day does not go as planned.

Purpose:
--------
- Event loop over departures, timed legs, stop services and give-ups,
  interleaved with fixed-step traffic
- Buses run each stop-to-stop segment on the road (stops act as bays); rail
  and buses without a road path keep their schedule
- Prevailing times (historical profile raised to recent observations) drive
  en-route rerouting and pre-departure mode switches
- Activity outcomes, trip records, link times, boardings and hours

Usage:
------
    from simcore.day import TravelerDay, TripAssignment, run_day

    result = run_day(graph, profile, travelers, seed=7)
    result.outcomes_frame().status.value_counts()
    new_profile = result.experienced_profile(profile)

Key Features:
------------
- Events at equal times are handled by (kind, entity id); arrivals by (time, vehicle id)
- Idle periods are skipped to the next event
- Every planned activity ends the day with exactly one outcome
"""

import logging
import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np
import pandas as pd

from demand.activities import Activity
from demand.tours import PlannedTrip
from demand.trucks import TruckTrip
from network.model import MultimodalGraph, TransitMode, VehicleClass, node_place, stop_place
from router.dispatch import TripRouter
from router.params import RouterParams
from router.plan import PERSON_MODES, Leg, LegKind, Mode, TripPlan, make_plan
from router.profile import BIN_SECONDS, N_BINS, TravelTimeProfile, bin_of
from router.road import RoadRouter

from .events import Event, EventKind, EventQueue
from .params import SimulationParams
from .replan import (ActivityOutcome, CancelReason, cancel, cancel_reason, cannot_fit,
                     evaluate_arrival, fastest_plan)
from .traffic import TrafficModel
from .transit import Passenger, StopQueues, TransitVehicleState, serve_stop

TIMED_KINDS = frozenset({LegKind.WALK, LegKind.BIKE, LegKind.PARK})


class TripStatus(str, Enum):
    ARRIVED = 'arrived'
    IN_PLACE = 'in_place'
    NOT_TRAVELED = 'not_traveled'
    UNFINISHED = 'unfinished'


@dataclass(frozen=True)
class TripAssignment:
    """A planned trip with its chosen mode (``None`` = untravelable) and routed plan."""
    trip: PlannedTrip
    mode: Optional[Mode]
    plan: Optional[TripPlan]
    departure: float


@dataclass(frozen=True)
class TravelerDay:
    person_id: int
    home_node: int
    activities: Tuple[Activity, ...]
    trips: Tuple[TripAssignment, ...]
    available_modes: Tuple[Mode, ...] = PERSON_MODES


@dataclass
class TripRecord:
    person_id: int
    trip_index: int
    activity_id: Optional[int]
    purpose: str
    planned_mode: Optional[Mode]
    departure: float
    origin_node: int
    destination_node: int
    mode: Optional[Mode] = None
    status: Optional[TripStatus] = None
    arrival: Optional[float] = None
    predicted: Optional[float] = None
    reroutes: int = 0
    mode_switch: bool = False
    links: List[int] = field(default_factory=list)

    @property
    def experienced(self) -> Optional[float]:
        return None if self.arrival is None else self.arrival - self.departure

    def to_dict(self) -> Dict[str, Any]:
        return {
            'person_id': self.person_id,
            'trip_index': self.trip_index,
            'activity_id': -1 if self.activity_id is None else self.activity_id,
            'purpose': self.purpose,
            'planned_mode': self.planned_mode.value if self.planned_mode else '',
            'mode': self.mode.value if self.mode else '',
            'status': self.status.value if self.status else '',
            'departure': self.departure,
            'arrival': self.arrival,
            'predicted': self.predicted,
            'experienced': self.experienced,
            'reroutes': self.reroutes,
            'mode_switch': int(self.mode_switch),
            'origin_node': self.origin_node,
            'destination_node': self.destination_node,
            'n_links': len(self.links),
        }


@dataclass
class DayResult:
    outcomes: List[ActivityOutcome]
    trips: List[TripRecord]
    link_ids: Tuple[int, ...]
    car_time_sum: np.ndarray
    car_time_count: np.ndarray
    truck_time_sum: np.ndarray
    truck_time_count: np.ndarray
    boardings_by_pattern: Dict[str, int]
    boardings_by_mode: Dict[Tuple[str, str], int]
    vehicle_hours: float
    bus_hours: float
    person_hours: float
    transit_person_hours: float
    vehicles_in_network: np.ndarray
    entered: np.ndarray
    exited: np.ndarray
    trajectories: List[Dict[str, Any]] = field(default_factory=list)
    denied_boardings: int = 0
    gave_up: int = 0
    truck_trips: int = 0
    end_time: float = 0.0

    @property
    def total_boardings(self) -> int:
        return sum(self.boardings_by_pattern.values())

    @property
    def reroutes(self) -> int:
        return sum(r.reroutes for r in self.trips)

    @property
    def mode_switches(self) -> int:
        return sum(1 for r in self.trips if r.mode_switch)

    def experienced_profile(self, base: TravelTimeProfile) -> TravelTimeProfile:
        """Mean car link times by entry bin; bins nobody drove through are free-flow."""
        times = np.repeat(base.free_flow_times[:, None], N_BINS, axis=1)
        seen = self.car_time_count > 0
        times[seen] = self.car_time_sum[seen] / self.car_time_count[seen]
        return base.with_times(times)

    def outcomes_frame(self) -> pd.DataFrame:
        columns = ['activity_id', 'person_id', 'type', 'status', 'cancel_reason', 'planned_start',
                   'planned_duration', 'realized_start', 'realized_duration', 'location_zone']
        return pd.DataFrame([o.to_dict() for o in self.outcomes], columns=columns)

    def trips_frame(self) -> pd.DataFrame:
        rows = [r.to_dict() for r in self.trips]
        if not rows:
            return pd.DataFrame(columns=list(TripRecord(0, 0, None, '', None, 0.0, 0, 0).to_dict()))
        return pd.DataFrame(rows)

    def link_times_frame(self) -> pd.DataFrame:
        """Mean experienced car time per observed (link, bin)."""
        rows, cols = np.nonzero(self.car_time_count)
        ids = np.asarray(self.link_ids)
        return pd.DataFrame({
            'link_id': ids[rows], 'bin': cols,
            'mean_time': np.round(self.car_time_sum[rows, cols] / self.car_time_count[rows, cols], 3),
            'count': self.car_time_count[rows, cols],
        })

    def boardings_frame(self) -> pd.DataFrame:
        return pd.DataFrame(sorted(self.boardings_by_pattern.items()), columns=['pattern_id', 'boardings'])


@dataclass(eq=False)
class _Traveler:
    day: TravelerDay
    node: int
    activities: Dict[int, Activity]
    trip_pos: int = 0
    plan: Optional[TripPlan] = None
    leg_pos: int = 0
    record: Optional[TripRecord] = None
    passenger: Optional[Passenger] = None


class DaySimulator:
    """
    Runs ``travelers`` (and background trucks) through one day on ``graph``
    with ``profile`` as the historical expectation.
    """

    def __init__(self, graph: MultimodalGraph, profile: TravelTimeProfile, travelers: Sequence[TravelerDay],
                 params: Optional[SimulationParams] = None, router_params: Optional[RouterParams] = None,
                 trucks: Sequence[Tuple[TruckTrip, TripPlan]] = (), seed: int = 0):
        self.graph = graph
        self.profile = profile
        self.params = params or SimulationParams()
        self.router_params = router_params or RouterParams()
        self.seed = seed
        self.logger = logging.getLogger('simcore.DaySimulator')

        self.traffic = TrafficModel(graph, self.params, reroute_hook=self._reroute)
        self.router = TripRouter(graph, profile, self.router_params)
        self._prevailing = self.router
        self._prevailing_stamp = -math.inf
        self.events = EventQueue()
        self.stops = StopQueues()
        self.outcomes: Dict[int, ActivityOutcome] = {}
        self.records: List[TripRecord] = []
        self.travelers: Dict[int, _Traveler] = {}
        self.runs: Dict[int, TransitVehicleState] = {}
        self.run_segments: Dict[int, Optional[List[List[int]]]] = {}
        self.boardings_by_pattern: Dict[str, int] = {}
        self.boardings_by_mode: Dict[Tuple[str, str], int] = {}
        self.denied = 0
        self.gave_up = 0
        self.truck_trips = 0

        for day in sorted(travelers, key=lambda d: d.person_id):
            tr = _Traveler(day, day.home_node, {a.id: a for a in day.activities})
            self.travelers[day.person_id] = tr
            if day.trips:
                self.events.push(day.trips[0].departure, EventKind.DEPART, day.person_id)
        for truck, plan in trucks:
            self.events.push(truck.departure, EventKind.TRUCK_DEPART, truck.id, plan)
        self._schedule_transit()

    # --- transit -----------------------------------------------------------

    def _bus_segments(self, pattern, router: RoadRouter,
                      cache: Dict[Tuple[int, int], Optional[List[int]]]) -> Optional[List[List[int]]]:
        nodes = [self.graph.stops[s].node_id for s in pattern.stop_ids]
        if any(n is None for n in nodes):
            return None
        segments = []
        for a, b in zip(nodes, nodes[1:]):
            if a == b:
                segments.append([])
                continue
            if (a, b) not in cache:
                plan = router.shortest_path(a, b, 0.0, 'bus')
                cache[(a, b)] = plan.link_ids() if plan is not None else None
            if cache[(a, b)] is None:
                return None
            segments.append(cache[(a, b)])
        return segments

    def _schedule_transit(self) -> None:
        if not self.graph.patterns:
            return
        bus_router = RoadRouter(self.graph, TravelTimeProfile.free_flow(self.graph), self.router_params)
        cache: Dict[Tuple[int, int], Optional[List[int]]] = {}
        run_id = 0
        on_schedule = 0
        for pid in sorted(self.graph.patterns):
            pattern = self.graph.patterns[pid]
            segments = self._bus_segments(pattern, bus_router, cache) if pattern.mode == TransitMode.BUS else None
            if pattern.mode == TransitMode.BUS and segments is None:
                on_schedule += 1
            for k in range(pattern.n_trips):
                self.runs[run_id] = TransitVehicleState(run_id, pattern, k)
                self.run_segments[run_id] = segments
                self.events.push(pattern.departures[k][0], EventKind.TRANSIT_SERVE, run_id, 0)
                run_id += 1
        if on_schedule:
            self.logger.warning(f"{on_schedule} bus patterns have no road path between stops and run on schedule")

    def _serve(self, run_id: int, stop_index: int, t: float) -> None:
        run = self.runs[run_id]
        pattern = run.pattern
        waiting = self.stops.queue(pattern.id, stop_index)
        outcome = serve_stop(run, stop_index, waiting, t, self.params)
        self.denied += outcome.denied
        if outcome.boarded:
            n = len(outcome.boarded)
            self.boardings_by_pattern[pattern.id] = self.boardings_by_pattern.get(pattern.id, 0) + n
            key = (pattern.agency, pattern.mode.value)
            self.boardings_by_mode[key] = self.boardings_by_mode.get(key, 0) + n
        for p in sorted(outcome.alighted, key=lambda p: p.person_id):
            tr = self.travelers[p.person_id]
            tr.passenger = None
            self._advance(tr, t)
        if run.finished:
            return
        j = stop_index
        if self.run_segments[run_id] is None:
            times = pattern.arrivals[run.trip_index] if j + 1 == pattern.n_stops - 1 \
                else pattern.departures[run.trip_index]
            self.events.push(max(t, times[j + 1]), EventKind.TRANSIT_SERVE, run_id, j + 1)
        else:
            release = max(float(pattern.departures[run.trip_index][j]), t + outcome.dwell)
            self.events.push(release, EventKind.BUS_RELEASE, run_id, j)

    def _release_bus(self, run_id: int, j: int, t: float) -> None:
        links = self.run_segments[run_id][j]
        if not links:
            self._serve(run_id, j + 1, t)
            return
        self.traffic.insert(VehicleClass.BUS, links, t, owner=('bus', run_id, j + 1))

    # --- travelers ---------------------------------------------------------

    def _centroid(self, zone: int) -> int:
        return self.graph.zone_centroids[zone]

    def _set_outcome(self, outcome: ActivityOutcome) -> None:
        self.outcomes.setdefault(outcome.activity_id, outcome)

    def _previous_cancelled(self, trip: PlannedTrip) -> bool:
        prev = self.outcomes.get(trip.previous_activity_id) if trip.previous_activity_id is not None else None
        return prev is not None and prev.cancelled

    def _next_trip(self, tr: _Traveler, ready: float) -> None:
        tr.trip_pos += 1
        tr.plan = None
        tr.record = None
        if tr.trip_pos < len(tr.day.trips):
            departure = max(tr.day.trips[tr.trip_pos].departure, ready)
            self.events.push(departure, EventKind.DEPART, tr.day.person_id)

    def _depart(self, tr: _Traveler, t: float) -> None:
        if tr.trip_pos >= len(tr.day.trips):
            return
        pid = tr.day.person_id
        assignment = tr.day.trips[tr.trip_pos]
        trip = assignment.trip
        act = tr.activities.get(trip.activity_id) if trip.activity_id is not None else None
        previous_cancelled = self._previous_cancelled(trip)
        dest = self._centroid(trip.destination_zone)
        record = TripRecord(pid, trip.index, trip.activity_id, trip.purpose, assignment.mode, t, tr.node, dest)
        self.records.append(record)
        tr.record = record

        if assignment.mode is None:
            record.status = TripStatus.NOT_TRAVELED
            if act is not None:
                self._set_outcome(cancel(act, CancelReason.UNTRAVELABLE))
            self._next_trip(tr, t)
            return
        if tr.node == dest:
            record.mode = assignment.mode
            record.status = TripStatus.IN_PLACE
            record.predicted = 0.0
            self._arrive(tr, t)
            return

        router = self._prevailing_router(t)
        modes = tr.day.available_modes
        plan = assignment.plan
        if plan is None or t != assignment.departure or tr.node != plan.origin_node:
            plan = router.route(assignment.mode, tr.node, dest, t, pid, trip.activity_id)
            if plan is None:
                plan = fastest_plan(router, modes, tr.node, dest, t, pid, trip.activity_id, prefer=assignment.mode)
        if plan is None:
            record.status = TripStatus.NOT_TRAVELED
            if act is not None:
                self._set_outcome(cancel(act, CancelReason.UNTRAVELABLE))
            self._next_trip(tr, t)
            return

        if act is not None and t + plan.predicted_total > act.planned_start + self.params.late_tolerance:
            alternative = fastest_plan(router, modes, tr.node, dest, t, pid, trip.activity_id, prefer=plan.mode)
            if alternative is not None and alternative.predicted_total < plan.predicted_total:
                plan = alternative
            if cannot_fit(act, t + plan.predicted_total):
                record.status = TripStatus.NOT_TRAVELED
                self._set_outcome(cancel(act, cancel_reason(previous_cancelled)))
                self._next_trip(tr, t)
                return

        record.mode = plan.mode
        record.mode_switch = plan.mode != assignment.mode
        record.predicted = plan.predicted_total
        tr.plan = plan
        tr.leg_pos = 0
        self._advance(tr, t)

    def _advance(self, tr: _Traveler, t: float) -> None:
        """Execute legs from ``tr.leg_pos`` until the traveler waits on something."""
        legs = tr.plan.legs
        pid = tr.day.person_id
        while tr.leg_pos < len(legs):
            leg = legs[tr.leg_pos]
            if leg.kind == LegKind.DRIVE:
                j = tr.leg_pos
                while j < len(legs) and legs[j].kind == LegKind.DRIVE:
                    j += 1
                block = legs[tr.leg_pos:j]
                shift = t - block[0].start
                self.traffic.insert(VehicleClass.CAR, [l.link_id for l in block], t, owner=('person', pid),
                                    predicted_entry=[l.start + shift for l in block])
                tr.leg_pos = j
                return
            if leg.kind in (LegKind.WAIT, LegKind.BOARD):
                j = tr.leg_pos
                while legs[j].kind != LegKind.RIDE:
                    j += 1
                ride = legs[j]
                passenger = Passenger(pid, ride.to_stop_index, t)
                self.stops.join(ride.pattern_id, ride.stop_index, passenger)
                tr.passenger = passenger
                self.events.push(t + self.params.patience, EventKind.GIVE_UP, pid, passenger)
                tr.leg_pos = j + 1
                return
            if leg.kind in (LegKind.ALIGHT, LegKind.RIDE):
                tr.leg_pos += 1
                continue
            j, total = tr.leg_pos, 0.0
            while j < len(legs) and legs[j].kind in TIMED_KINDS:
                total += legs[j].duration
                j += 1
            tr.leg_pos = j
            self.events.push(t + total, EventKind.LEG_DONE, pid)
            return
        self._arrive(tr, t)

    def _arrive(self, tr: _Traveler, t: float) -> None:
        record = tr.record
        record.arrival = t
        if record.status is None:
            record.status = TripStatus.ARRIVED
        tr.node = record.destination_node
        trip = tr.day.trips[tr.trip_pos].trip
        ready = t
        if trip.activity_id is not None:
            act = tr.activities[trip.activity_id]
            outcome = evaluate_arrival(act, t, self.params.late_tolerance, self._previous_cancelled(trip))
            self._set_outcome(outcome)
            if not outcome.cancelled:
                ready = outcome.realized_end
        self._next_trip(tr, ready)

    def _give_up(self, tr: _Traveler, passenger: Passenger, t: float) -> None:
        if not passenger.active or tr.passenger is not passenger:
            return
        passenger.active = False
        tr.passenger = None
        self.gave_up += 1
        ride = tr.plan.legs[tr.leg_pos - 1]
        stop_id = self.graph.patterns[ride.pattern_id].stop_ids[ride.stop_index]
        record = tr.record
        edges = [e for e in self.graph.access_by_stop.get(stop_id, ()) if e.mode == 'walk']
        walk = None
        if edges:
            edge = min(edges, key=lambda e: (e.time, e.node_id))
            road = self._prevailing_router(t).road
            walk = road.shortest_path(edge.node_id, record.destination_node, t + edge.time, Mode.WALK)
            if walk is None and edge.node_id == record.destination_node:
                walk = make_plan(Mode.WALK, t + edge.time, (), edge.node_id, edge.node_id, self.router_params)
        if walk is None:
            record.status = TripStatus.UNFINISHED
            trip = tr.day.trips[tr.trip_pos].trip
            if trip.activity_id is not None:
                act = tr.activities[trip.activity_id]
                self._set_outcome(cancel(act, cancel_reason(self._previous_cancelled(trip))))
            if edges:
                tr.node = min(edges, key=lambda e: (e.time, e.node_id)).node_id
            self._next_trip(tr, t)
            return
        first = Leg(LegKind.WALK, t, edge.time, stop_place(stop_id), node_place(edge.node_id),
                    distance=edge.distance)
        tr.plan = make_plan(Mode.WALK, t, (first,) + walk.legs, edge.node_id, record.destination_node,
                            self.router_params, tr.day.person_id, record.activity_id)
        tr.leg_pos = 0
        record.mode = Mode.WALK
        record.mode_switch = True
        self._advance(tr, t)

    # --- prevailing times --------------------------------------------------

    def _prevailing_profile(self, t: float) -> Optional[TravelTimeProfile]:
        traffic = self.traffic
        b = bin_of(t)
        bins = [x for x in (b - 1, b) if x >= 0]
        total = traffic.car_time_sum[:, bins].sum(axis=1)
        count = traffic.car_time_count[:, bins].sum(axis=1)
        observed = np.where(count > 0, total / np.maximum(count, 1), 0.0)
        for r, q in enumerate(traffic.queues):
            if q:
                observed[r] = max(observed[r], t - traffic.vehicles[q[0]].entered_at)
        if not observed.any():
            return None
        times = self.profile.times.copy()
        hi = min(b + 3, N_BINS)
        times[:, b:hi] = np.maximum(times[:, b:hi], observed[:, None])
        return self.profile.with_times(times)

    def _prevailing_router(self, t: float) -> TripRouter:
        every = self.params.prevailing_refresh
        stamp = math.floor(t / every) * every
        if stamp != self._prevailing_stamp:
            self._prevailing_stamp = stamp
            profile = self._prevailing_profile(t)
            self._prevailing = self.router if profile is None else self.router.with_profile(profile)
        return self._prevailing

    def _reroute(self, vid: int, t: float) -> Optional[Tuple[List[int], List[float]]]:
        state = self.traffic.vehicles[vid]
        if not state.owner or state.owner[0] != 'person':
            return None
        road = self._prevailing_router(t).road
        current = state.link_id
        remaining = state.route[state.route_index + 1:]
        node = self.graph.links[current].to_node
        t_exit = t + road.profile.travel_time(current, t)
        old = road.evaluate_route(node, remaining, t_exit)
        new = road.shortest_path(node, old.destination_node, t_exit, Mode.DRIVE)
        if new is None or new.predicted_total >= old.predicted_total - 1e-6 or new.link_ids() == remaining:
            return None
        self.logger.debug(f"Rerouted person {state.owner[1]} at link {current}: "
                          f"{old.predicted_total:.0f}s -> {new.predicted_total:.0f}s remaining")
        return new.link_ids(), [leg.start for leg in new.legs]

    # --- loop --------------------------------------------------------------

    def _handle(self, event: Event) -> None:
        t = event.time
        kind = event.kind
        if kind == EventKind.TRANSIT_SERVE:
            self._serve(event.entity, event.payload, t)
        elif kind == EventKind.BUS_RELEASE:
            self._release_bus(event.entity, event.payload, t)
        elif kind == EventKind.LEG_DONE:
            self._advance(self.travelers[event.entity], t)
        elif kind == EventKind.GIVE_UP:
            self._give_up(self.travelers[event.entity], event.payload, t)
        elif kind == EventKind.DEPART:
            self._depart(self.travelers[event.entity], t)
        elif kind == EventKind.TRUCK_DEPART:
            links = event.payload.link_ids()
            if links:
                self.traffic.insert(VehicleClass.TRUCK, links, t, owner=('truck', event.entity))

    def _drain(self, t: float) -> None:
        while True:
            nxt = self.events.peek_time()
            if nxt is None or nxt > t:
                return
            self._handle(self.events.pop())

    def _on_arrival(self, vid: int, t: float) -> None:
        state = self.traffic.vehicles[vid]
        owner = state.owner
        if owner[0] == 'person':
            tr = self.travelers[owner[1]]
            tr.record.reroutes += state.reroutes
            tr.record.links.extend(lid for lid, _, _ in state.link_log)
            self._advance(tr, t)
        elif owner[0] == 'bus':
            self.events.push(t, EventKind.TRANSIT_SERVE, owner[1], owner[2])
        else:
            self.truck_trips += 1

    def run(self) -> DayResult:
        """
        Raises:
            SimulationDeadlock: traffic stopped moving for ``deadlock_timeout``
        """
        dt = self.params.dt
        horizon = self.params.horizon
        k = 0
        while True:
            t = k * dt
            self._drain(t)
            if t >= horizon:
                break
            if self.traffic.is_idle:
                nxt = self.events.peek_time()
                if nxt is None:
                    break
                if nxt > t:
                    k = max(k + 1, int(math.ceil(nxt / dt)))
                    continue
            for te, vid in self.traffic.step(t):
                self._on_arrival(vid, te)
            k += 1
        return self._finalize(k * dt)

    def _finalize(self, end: float) -> DayResult:
        for pid in sorted(self.travelers):
            tr = self.travelers[pid]
            if tr.record is not None and tr.record.status is None:
                tr.record.status = TripStatus.UNFINISHED
            for act in sorted(tr.day.activities, key=lambda a: (a.planned_start, a.id)):
                if act.id not in self.outcomes:
                    trip = next((a.trip for a in tr.day.trips if a.trip.activity_id == act.id), None)
                    previous = trip is not None and self._previous_cancelled(trip)
                    self._set_outcome(cancel(act, cancel_reason(previous)))

        traffic = self.traffic
        arrived = [r for r in self.records if r.status == TripStatus.ARRIVED]
        person_hours = sum(r.experienced for r in arrived) / 3600.0
        transit_hours = sum(r.experienced for r in arrived if r.mode is not None and r.mode.is_transit) / 3600.0
        result = DayResult(
            outcomes=[self.outcomes[a] for a in sorted(self.outcomes)],
            trips=sorted(self.records, key=lambda r: (r.person_id, r.trip_index)),
            link_ids=self.graph.link_ids,
            car_time_sum=traffic.car_time_sum, car_time_count=traffic.car_time_count,
            truck_time_sum=traffic.truck_time_sum, truck_time_count=traffic.truck_time_count,
            boardings_by_pattern=dict(sorted(self.boardings_by_pattern.items())),
            boardings_by_mode=dict(sorted(self.boardings_by_mode.items())),
            vehicle_hours=traffic.vehicle_hours(VehicleClass.CAR) + traffic.vehicle_hours(VehicleClass.TRUCK),
            bus_hours=traffic.vehicle_hours(VehicleClass.BUS),
            person_hours=person_hours,
            transit_person_hours=transit_hours,
            vehicles_in_network=traffic.in_network_seconds / BIN_SECONDS,
            entered=traffic.entered, exited=traffic.exited,
            trajectories=traffic.trajectories,
            denied_boardings=self.denied, gave_up=self.gave_up, truck_trips=self.truck_trips, end_time=end,
        )
        statuses: Dict[str, int] = {}
        for o in result.outcomes:
            statuses[o.status.value] = statuses.get(o.status.value, 0) + 1
        self.logger.info(f"Day done at t={end:.0f}s: {len(arrived)} trips arrived, outcomes {statuses}, "
                         f"{result.vehicle_hours:.1f} veh-h, {result.total_boardings} boardings, "
                         f"{result.reroutes} reroutes, {traffic.squeezes} squeezes")
        return result


def run_day(graph: MultimodalGraph, profile: TravelTimeProfile, travelers: Sequence[TravelerDay], seed: int = 0,
            params: Optional[SimulationParams] = None, router_params: Optional[RouterParams] = None,
            trucks: Sequence[Tuple[TruckTrip, TripPlan]] = ()) -> DayResult:
    """Simulate one day; the result depends only on the inputs."""
    return DaySimulator(graph, profile, travelers, params, router_params, trucks, seed).run()
