"""
Test Simcore Module
===================

Traffic dynamics, transit stop service, within-day replanning and the day simulator.

Usage:
    python -m pytest tests/test_simcore.py
"""

from collections import deque

import numpy as np
import pytest

from conftest import corridor_graph, grid_graph, make_link
from demand.activities import Activity, ActivityType
from demand.tours import HOME, PlannedTrip
from network.model import MultimodalGraph, Node, TransitMode, TransitPattern
from router.dispatch import TripRouter
from router.plan import Mode
from router.profile import N_BINS, TravelTimeProfile
from router.road import shortest_path
from simcore.day import TravelerDay, TripAssignment, TripStatus, run_day
from simcore.events import EventKind, EventQueue
from simcore.params import SimulationParams
from simcore.replan import CancelReason, OutcomeStatus, cannot_fit, evaluate_arrival, fastest_plan
from simcore.traffic import TrafficModel, check_cfl
from simcore.transit import Passenger, StopQueues, TransitVehicleState, serve_stop
from utils.errors import ConfigError, NetworkError, SimulationDeadlock

H = 3600.0
FFS = 13.9


def run_until_empty(traffic: TrafficModel, limit: int = 5000):
    arrivals = []
    k = 0
    while not traffic.is_idle and k < limit:
        arrivals.extend(traffic.step(k * traffic.dt))
        assert traffic.check_order()
        assert traffic.link_conserved()
        k += 1
    return arrivals


class TestTrafficModel:
    """Test vehicle movement and link transfers."""

    def test_cfl_bound(self):
        with pytest.raises(ConfigError):
            check_cfl(corridor_graph(), 2.0)
        check_cfl(corridor_graph(), 1.5)

    def test_cfl_ignores_uncongestable(self):
        graph = corridor_graph(1, jam=0.5, congestable=False)
        check_cfl(graph, 1.0)

    def test_free_flow_crossing_is_exact(self):
        traffic = TrafficModel(corridor_graph(3, 500.0), SimulationParams(dt=1.0))
        vid = traffic.insert('car', [1, 2, 3], 0.0)
        arrivals = run_until_empty(traffic)
        assert arrivals[0][1] == vid
        assert arrivals[0][0] == pytest.approx(1500.0 / FFS, rel=1e-9)
        link_log = traffic.vehicles[vid].link_log
        assert [lid for lid, _, _ in link_log] == [1, 2, 3]
        for _, enter, leave in link_log:
            assert leave - enter == pytest.approx(500.0 / FFS, rel=1e-9)

    def test_future_insert_waits_for_its_time(self):
        traffic = TrafficModel(corridor_graph(2, 500.0), SimulationParams(dt=1.0))
        vid = traffic.insert('car', [1, 2], 100.0)
        for k in range(100):
            traffic.step(float(k))
        assert traffic.row[vid] == -1 and traffic.vehicle_hours('car') == 0
        arrivals = [a for k in range(100, 300) for a in traffic.step(float(k))]
        assert [v for _, v in arrivals] == [vid]
        assert arrivals[0][0] == pytest.approx(100.0 + 1000.0 / FFS, rel=1e-9)

    def test_released_queue_matches_wave_solution(self):
        # with dt = jam spacing / wave speed each follower starts exactly one step after its leader
        graph = corridor_graph(1, 2000.0)
        dt = 7.5 / 5.0
        traffic = TrafficModel(graph, SimulationParams(dt=dt))
        start = [1000.0 - 7.5 * k for k in range(10)]
        vids = [traffic.place_vehicle(1, x) for x in start]
        for n in range(1, 21):
            traffic.step((n - 1) * dt)
            for k, vid in enumerate(vids):
                expected = start[k] + FFS * dt * max(0, n - k)
                assert traffic.pos[vid] == pytest.approx(expected, abs=1e-6)

    def test_fifo_and_conservation(self):
        traffic = TrafficModel(corridor_graph(3, 300.0), SimulationParams(dt=1.0))
        vids = [traffic.insert('car', [1, 2, 3], float(k // 3)) for k in range(40)]
        arrivals = run_until_empty(traffic)
        assert [vid for _, vid in arrivals] == vids
        times = [t for t, _ in arrivals]
        assert times == sorted(times)
        counts = traffic.conservation()
        assert counts['entered'] == counts['exited'] == 3 * 40
        assert counts['present'] == counts['buffered'] == 0

    @pytest.mark.slow
    def test_large_day_keeps_order_and_counts(self):
        graph = grid_graph(8)
        profile = TravelTimeProfile.free_flow(graph)
        rng = np.random.default_rng(7)
        nodes = sorted(graph.nodes)
        routes = {}
        expected = []
        traffic = TrafficModel(graph, SimulationParams(dt=1.0))
        for _ in range(10000):
            o, d = (int(n) for n in rng.choice(nodes, size=2, replace=False))
            if (o, d) not in routes:
                plan = shortest_path(graph, profile, o, d, 0.0)
                routes[o, d] = plan.link_ids()
            route = routes[o, d]
            t = float(rng.integers(0, 5 * 3600))
            vid = traffic.insert('car', route, t)
            expected.append((vid, t + sum(graph.links[l].length for l in route) / FFS, len(route)))

        arrivals = dict((vid, t) for t, vid in run_until_empty(traffic, limit=30000))

        assert len(arrivals) == 10000
        for vid, earliest, _ in expected:
            assert arrivals[vid] >= earliest - 1e-6
        counts = traffic.conservation()
        assert counts['entered'] == counts['exited'] == sum(n for _, _, n in expected)
        assert counts['present'] == counts['buffered'] == 0

    def test_queue_limits_throughput(self):
        traffic = TrafficModel(corridor_graph(2, 400.0), SimulationParams(dt=1.0))
        for _ in range(30):
            traffic.insert('car', [1, 2], 0.0)
        arrivals = run_until_empty(traffic)
        first, last = arrivals[0][0], arrivals[-1][0]
        # at most one vehicle leaves a link per step
        assert last - first >= 28.0
        assert first == pytest.approx(800.0 / FFS, rel=1e-9)

    def test_truck_is_slower(self):
        traffic = TrafficModel(corridor_graph(2, 500.0), SimulationParams(dt=1.0))
        traffic.insert('truck', [1, 2], 0.0)
        arrivals = run_until_empty(traffic)
        assert arrivals[0][0] == pytest.approx(1000.0 / (FFS * 0.9), rel=1e-9)
        assert traffic.truck_time_count.sum() == 2
        assert traffic.vehicle_hours('truck') > 0
        assert traffic.vehicle_hours('car') == 0

    def test_link_times_by_entry_bin(self):
        traffic = TrafficModel(corridor_graph(2, 500.0), SimulationParams(dt=1.0))
        traffic.insert('car', [1, 2], 0.0)
        run_until_empty(traffic)
        assert traffic.car_time_count[:, 0].tolist() == [1, 1]
        assert traffic.car_time_sum[0, 0] == pytest.approx(500.0 / FFS, rel=1e-9)

    def test_unknown_link(self):
        traffic = TrafficModel(corridor_graph(), SimulationParams())
        with pytest.raises(NetworkError):
            traffic.insert('car', [99], 0.0)

    def test_gridlock_raises_deadlock(self):
        nodes = {1: Node(1, 0.0, 0.0, 1), 2: Node(2, 7.5, 0.0, 1)}
        links = {1: make_link(1, 1, 2, length=7.5), 2: make_link(2, 2, 1, length=7.5)}
        graph = MultimodalGraph(nodes=nodes, links=links)
        traffic = TrafficModel(graph, SimulationParams(dt=1.0, stuck_time=5.0, deadlock_timeout=10.0))
        for lid, other in ((1, 2), (2, 1)):
            traffic.place_vehicle(lid, 7.5, route=[lid, other])
            traffic.place_vehicle(lid, 0.0, route=[lid, other])
        with pytest.raises(SimulationDeadlock) as exc:
            for k in range(30):
                traffic.step(float(k))
        assert exc.value.dump['on_links'] == 4
        assert exc.value.dump['blocked_links'] == [1, 2]


def make_pattern(n_stops=3, seat=2, crush=3):
    stops = tuple(f"S{j}" for j in range(n_stops))
    times = tuple(100 * j for j in range(n_stops))
    return TransitPattern(id='P:0', route_id='P', mode=TransitMode.BUS, agency='a', stop_ids=stops,
                          trip_ids=('t0',), arrivals=(times,), departures=(times,),
                          seat_capacity=seat, crush_capacity=crush)


class TestServeStop:
    """Test alighting, crush-capacity boarding and dwell times."""

    def test_alight_board_deny(self):
        vehicle = TransitVehicleState(0, make_pattern(), 0)
        rider = Passenger(99, alight_index=1, joined=0.0)
        vehicle.onboard.append(rider)
        waiting = deque(Passenger(i, alight_index=2, joined=float(i)) for i in range(1, 6))
        waiting[1].active = False

        outcome = serve_stop(vehicle, 1, waiting, 100.0, SimulationParams(min_dwell=0.0))

        assert [p.person_id for p in outcome.alighted] == [99]
        assert [p.person_id for p in outcome.boarded] == [1, 3, 4]
        assert outcome.denied == 1
        assert [p.person_id for p in waiting] == [5]
        assert vehicle.seated == 2 and vehicle.standing == 1
        assert outcome.dwell == pytest.approx(2.0 * 3 + 1.5 * 1)
        assert vehicle.next_stop == 2

    def test_min_dwell(self):
        vehicle = TransitVehicleState(0, make_pattern(), 0)
        outcome = serve_stop(vehicle, 0, deque(), 0.0, SimulationParams())
        assert outcome.dwell == SimulationParams().min_dwell

    def test_last_stop_empties(self):
        vehicle = TransitVehicleState(0, make_pattern(), 0)
        vehicle.onboard.extend([Passenger(1, 2, 0.0), Passenger(2, 2, 0.0)])
        vehicle.next_stop = 2
        waiting = deque([Passenger(3, 2, 0.0)])
        outcome = serve_stop(vehicle, 2, waiting, 200.0, SimulationParams())
        assert len(outcome.alighted) == 2
        assert outcome.boarded == ()
        assert outcome.denied == 0
        assert vehicle.onboard == [] and vehicle.finished

    def test_queues_count_active(self):
        queues = StopQueues()
        queues.join('P:0', 0, Passenger(1, 1, 0.0))
        gone = Passenger(2, 1, 0.0, active=False)
        queues.join('P:0', 0, gone)
        assert queues.waiting() == 1
        assert queues.snapshot() == {('P:0', 0): 1}

    @pytest.mark.parametrize('seed', range(5))
    def test_matches_queue_oracle(self, seed):
        rng = np.random.default_rng(seed)
        params = SimulationParams(min_dwell=float(rng.integers(0, 20)))
        for _ in range(100):
            n_stops = int(rng.integers(2, 7))
            seat = int(rng.integers(1, 4))
            crush = seat + int(rng.integers(0, 5))
            pattern = make_pattern(n_stops, seat, crush)
            specs = {j: [(100 * j + k, int(rng.integers(j + 1, n_stops)), bool(rng.random() < 0.85))
                         for k in range(int(rng.integers(0, 9)))] for j in range(n_stops - 1)}
            waiting = {j: deque(Passenger(pid, a, 0.0, active=act) for pid, a, act in specs[j]) for j in specs}
            oracle = {j: [[pid, a, act] for pid, a, act in specs[j]] for j in specs}
            for run in range(int(rng.integers(1, 4))):
                vehicle = TransitVehicleState(run, pattern, 0)
                onboard = []
                for j in range(n_stops):
                    last = j == n_stops - 1
                    off = [p for p in onboard if last or p[1] == j]
                    onboard = [p for p in onboard if not (last or p[1] == j)]
                    on = []
                    if not last:
                        eligible = [p for p in oracle[j] if p[2]]
                        on = eligible[:crush - len(onboard)]
                        for p in on:
                            p[2] = False
                        onboard += on
                    denied = 0 if last else sum(p[2] for p in oracle[j])

                    outcome = serve_stop(vehicle, j, waiting.get(j, deque()), 100.0 * j, params)

                    assert [p.person_id for p in outcome.alighted] == [p[0] for p in off]
                    assert [p.person_id for p in outcome.boarded] == [p[0] for p in on]
                    assert outcome.denied == denied
                    assert outcome.dwell == pytest.approx(
                        max(params.min_dwell, params.board_time * len(on) + params.alight_time * len(off)))
                    assert len(vehicle.onboard) == len(onboard) <= crush
                    assert vehicle.seated == min(seat, len(onboard))
                assert vehicle.finished and vehicle.onboard == []


class TestEventQueue:
    """Test deterministic event ordering."""

    def test_order(self):
        q = EventQueue()
        q.push(10.0, EventKind.DEPART, 2)
        q.push(10.0, EventKind.DEPART, 1)
        q.push(10.0, EventKind.TRANSIT_SERVE, 5)
        q.push(5.0, EventKind.GIVE_UP, 9)
        popped = [(e.time, e.kind, e.entity) for e in q.pop_until(10.0)]
        assert popped == [(5.0, EventKind.GIVE_UP, 9), (10.0, EventKind.TRANSIT_SERVE, 5),
                          (10.0, EventKind.DEPART, 1), (10.0, EventKind.DEPART, 2)]
        assert not q


def flexible(start=10 * H, duration=H, min_duration=0.5 * H, latest_end=11.5 * H, zone=None):
    return Activity(id=1, person_id=1, type=ActivityType.SHOP_OTHER, planned_start=start,
                    planned_duration=duration, min_duration=min_duration, latest_end=latest_end,
                    location_zone=zone)


class TestReplanning:
    """Test activity outcomes on arrival."""

    def test_on_time(self):
        outcome = evaluate_arrival(flexible(), 9.5 * H, 300.0)
        assert outcome.status == OutcomeStatus.COMPLETED
        assert outcome.realized_start == 10 * H
        assert outcome.realized_duration == H

    def test_late_within_tolerance(self):
        assert evaluate_arrival(flexible(), 10 * H + 200, 300.0).status == OutcomeStatus.COMPLETED

    def test_postponed(self):
        outcome = evaluate_arrival(flexible(), 10.2 * H, 300.0)
        assert outcome.status == OutcomeStatus.POSTPONED
        assert outcome.realized_duration == H

    def test_shortened(self):
        outcome = evaluate_arrival(flexible(), 10.8 * H, 300.0)
        assert outcome.status == OutcomeStatus.SHORTENED
        assert outcome.realized_duration == pytest.approx(0.7 * H)

    def test_cancelled_too_late_and_cascade(self):
        outcome = evaluate_arrival(flexible(), 11.2 * H, 300.0)
        assert outcome.cancelled and outcome.cancel_reason == CancelReason.TOO_LATE
        assert outcome.realized_start is None
        chained = evaluate_arrival(flexible(), 11.2 * H, 300.0, previous_cancelled=True)
        assert chained.cancel_reason == CancelReason.CASCADE

    def test_mandatory_compressed(self):
        work = Activity(id=2, person_id=1, type=ActivityType.WORK, planned_start=8 * H, planned_duration=8 * H,
                        min_duration=6 * H, latest_end=16.5 * H)
        outcome = evaluate_arrival(work, 11 * H, 300.0)
        assert outcome.status == OutcomeStatus.SHORTENED
        assert outcome.realized_duration == 6 * H
        assert not cannot_fit(work, 20 * H)

    def test_mandatory_runs_past_latest_end(self):
        work = Activity(id=2, person_id=1, type=ActivityType.WORK, planned_start=8 * H, planned_duration=8 * H,
                        min_duration=6 * H, latest_end=16.5 * H)
        outcome = evaluate_arrival(work, 12 * H, 300.0)
        assert outcome.realized_start + outcome.realized_duration == 18 * H
        school = Activity(id=3, person_id=1, type=ActivityType.SCHOOL, planned_start=8 * H, planned_duration=6 * H,
                          min_duration=6 * H, latest_end=14.5 * H)
        late = evaluate_arrival(school, 12 * H, 300.0)
        assert late.status == OutcomeStatus.POSTPONED
        assert late.realized_duration == 6 * H

    def test_cannot_fit(self):
        assert cannot_fit(flexible(), 11.2 * H)
        assert not cannot_fit(flexible(), 10 * H)

    def test_fastest_plan(self, grid_with_metro):
        router = TripRouter(grid_with_metro, TravelTimeProfile.free_flow(grid_with_metro))
        plan = fastest_plan(router, [Mode.WALK, Mode.DRIVE], 1, 16, 8 * H)
        assert plan.mode == Mode.DRIVE
        bare = TripRouter(grid_graph(4), TravelTimeProfile.free_flow(grid_graph(4)))
        assert fastest_plan(bare, [Mode.WALK_TO_TRANSIT], 1, 16, 8 * H) is None


def one_activity_day(activity, mode, departure, home_mode=None, home_zone=1, home_node=1):
    """Home -> activity -> home for the activity's person."""
    pid = activity.person_id
    out = PlannedTrip(person_id=pid, index=0, origin_zone=home_zone, destination_zone=activity.location_zone,
                      purpose=activity.type.value, activity_id=activity.id, arrive_by=activity.planned_start)
    back = PlannedTrip(person_id=pid, index=1, origin_zone=activity.location_zone, destination_zone=home_zone,
                       purpose=HOME, depart_after=activity.planned_end, previous_activity_id=activity.id)
    return TravelerDay(person_id=pid, home_node=home_node, activities=(activity,),
                       trips=(TripAssignment(out, mode, None, departure),
                              TripAssignment(back, home_mode or mode or Mode.DRIVE, None, activity.planned_end)))


class TestDaySimulator:
    """Test complete simulated days."""

    def test_drive_day(self, grid):
        act = flexible(start=9 * H, latest_end=11 * H, zone=4)
        day = one_activity_day(act, Mode.DRIVE, 9 * H - 600)
        result = run_day(grid, TravelTimeProfile.free_flow(grid), [day])

        assert [o.status for o in result.outcomes] == [OutcomeStatus.COMPLETED]
        trips = result.trips_frame()
        assert trips.status.tolist() == ['arrived', 'arrived']
        assert trips.mode.tolist() == ['drive', 'drive']
        assert trips.experienced.iloc[0] == pytest.approx(4 * 400.0 / FFS, rel=1e-6)
        assert trips.departure.iloc[1] == 10 * H
        assert result.vehicle_hours == pytest.approx(2 * 4 * 400.0 / FFS / H, abs=3.0 / H)
        assert result.link_times_frame()['count'].sum() == 8
        assert result.vehicles_in_network.shape == (N_BINS,)

    def test_experienced_profile(self, grid):
        act = flexible(start=9 * H, latest_end=11 * H, zone=4)
        base = TravelTimeProfile.free_flow(grid)
        result = run_day(grid, base, [one_activity_day(act, Mode.DRIVE, 9 * H - 600)])
        profile = result.experienced_profile(base)
        assert np.allclose(profile.times, base.times)

    def test_untravelable(self, grid):
        act = flexible(start=9 * H, latest_end=11 * H, zone=4)
        result = run_day(grid, TravelTimeProfile.free_flow(grid), [one_activity_day(act, None, 9 * H - 600)])
        (outcome,) = result.outcomes
        assert outcome.cancelled and outcome.cancel_reason == CancelReason.UNTRAVELABLE
        assert result.trips_frame().status.tolist() == ['not_traveled', 'in_place']

    def test_cancel_before_leaving(self, grid):
        act = flexible(start=9 * H, latest_end=9.6 * H, zone=4)
        result = run_day(grid, TravelTimeProfile.free_flow(grid), [one_activity_day(act, Mode.DRIVE, 9.5 * H)])
        (outcome,) = result.outcomes
        assert outcome.cancel_reason == CancelReason.TOO_LATE
        assert result.trips_frame().status.iloc[0] == TripStatus.NOT_TRAVELED.value

    def test_cancelled_middle_activity_frees_the_next(self, grid):
        first = Activity(id=1, person_id=1, type=ActivityType.SHOP_OTHER, planned_start=8 * H, planned_duration=1.2 * H,
                         min_duration=0.5 * H, latest_end=10 * H, location_zone=4)
        middle = Activity(id=2, person_id=1, type=ActivityType.ERRANDS, planned_start=9 * H, planned_duration=0.5 * H,
                          min_duration=0.5 * H, latest_end=9.5 * H, location_zone=2)
        last = Activity(id=3, person_id=1, type=ActivityType.LEISURE, planned_start=9.3 * H,
                        planned_duration=0.5 * H, min_duration=0.5 * H, latest_end=9.3 * H + 2100, location_zone=3)
        trips = (
            PlannedTrip(person_id=1, index=0, origin_zone=1, destination_zone=4, purpose='shop_other',
                        activity_id=1, arrive_by=first.planned_start),
            PlannedTrip(person_id=1, index=1, origin_zone=4, destination_zone=2, purpose='errands',
                        activity_id=2, arrive_by=middle.planned_start, previous_activity_id=1),
            PlannedTrip(person_id=1, index=2, origin_zone=2, destination_zone=3, purpose='leisure',
                        activity_id=3, arrive_by=last.planned_start, previous_activity_id=2),
            PlannedTrip(person_id=1, index=3, origin_zone=3, destination_zone=1, purpose=HOME,
                        depart_after=last.planned_end, previous_activity_id=3),
        )
        departures = (8 * H - 600, first.planned_end, first.planned_end, last.planned_end)
        day = TravelerDay(person_id=1, home_node=1, activities=(first, middle, last),
                          trips=tuple(TripAssignment(t, Mode.DRIVE, None, d) for t, d in zip(trips, departures)))
        # performing the middle activity at its minimum would leave no room for the last
        assert cannot_fit(last, first.planned_end + middle.min_duration)

        result = run_day(grid, TravelTimeProfile.free_flow(grid), [day])

        status = {o.activity_id: o for o in result.outcomes}
        assert status[1].status == OutcomeStatus.COMPLETED
        assert status[2].cancel_reason == CancelReason.TOO_LATE
        assert status[3].status == OutcomeStatus.COMPLETED
        assert status[3].cancel_reason is None
        assert status[3].realized_start == last.planned_start
        frame = result.trips_frame()
        assert frame.status.tolist() == ['arrived', 'not_traveled', 'arrived', 'arrived']
        assert frame.origin_node.iloc[2] == frame.destination_node.iloc[0]
        assert frame.departure.iloc[2] == first.planned_end

    def test_transit_ride(self, grid_with_metro):
        act = flexible(start=8.5 * H, latest_end=10.5 * H, zone=2)
        day = one_activity_day(act, Mode.WALK_TO_TRANSIT, 8 * H - 100, home_mode=Mode.WALK)
        result = run_day(grid_with_metro, TravelTimeProfile.free_flow(grid_with_metro), [day])

        trips = result.trips_frame()
        assert trips.mode.iloc[0] == 'walk_to_transit'
        assert trips.arrival.iloc[0] == pytest.approx(8 * H + 80)
        assert result.boardings_by_mode == {('metro', 'metro_rail'): 1}
        assert result.total_boardings == 1
        assert result.transit_person_hours == pytest.approx(180.0 / H)
        assert result.outcomes[0].status == OutcomeStatus.COMPLETED

    def test_give_up_and_walk(self, grid_with_metro):
        act = flexible(start=8.5 * H, latest_end=10.5 * H, zone=2)
        day = one_activity_day(act, Mode.WALK_TO_TRANSIT, 8 * H - 100, home_mode=Mode.WALK)
        result = run_day(grid_with_metro, TravelTimeProfile.free_flow(grid_with_metro), [day],
                         params=SimulationParams(patience=60.0))
        assert result.gave_up == 1
        assert result.total_boardings == 0
        first = result.trips[0]
        assert first.mode == Mode.WALK and first.mode_switch
        assert first.arrival == pytest.approx(8 * H - 40 + 800.0 / 1.4)

    def test_every_activity_has_one_outcome(self, grid):
        days = []
        for pid in range(1, 6):
            act = Activity(id=pid * 1000, person_id=pid, type=ActivityType.ERRANDS, planned_start=9 * H,
                           planned_duration=H, min_duration=0.5 * H, latest_end=11 * H, location_zone=4)
            days.append(one_activity_day(act, Mode.DRIVE, 9 * H - 600))
        result = run_day(grid, TravelTimeProfile.free_flow(grid), days)
        assert sorted(o.activity_id for o in result.outcomes) == [pid * 1000 for pid in range(1, 6)]
        again = run_day(grid, TravelTimeProfile.free_flow(grid), list(reversed(days)))
        assert again.trips_frame().equals(result.trips_frame())
