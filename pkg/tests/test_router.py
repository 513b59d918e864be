"""
Test Router Module
==================

Travel-time profiles, road shortest paths, intermodal search and level of service.

Usage:
    python -m pytest tests/test_router.py
"""

import math
from bisect import bisect_left

import networkx as nx
import numpy as np
import pytest

from conftest import grid_graph, make_link, with_line
from network.model import TransferEdge
from router.dispatch import TripRouter
from router.intermodal import IntermodalRouter, intermodal_path
from router.los import LevelOfServiceCache, build_skims, mode_levels_of_service
from router.params import RouterParams
from router.plan import LegKind, Mode
from router.profile import BIN_SECONDS, N_BINS, TravelTimeProfile, bin_of
from router.road import RoadRouter, shortest_path
from utils.errors import NetworkError

SIX = 6 * 3600


def random_speed_grid(seed: int, size: int = 5):
    rng = np.random.default_rng(seed)
    graph = grid_graph(size)
    links = {lid: make_link(lid, l.from_node, l.to_node, length=l.length, ffs=float(rng.uniform(5.0, 25.0)))
             for lid, l in graph.links.items()}
    return graph.replace(links=links)


class TestTravelTimeProfile:
    """Test binning, flooring and FIFO exit times."""

    def test_bin_of_clamps(self):
        assert bin_of(-10.0) == 0
        assert bin_of(BIN_SECONDS * 3 + 1) == 3
        assert bin_of(BIN_SECONDS * 500) == N_BINS - 1

    def test_free_flow_times(self, grid):
        profile = TravelTimeProfile.free_flow(grid)
        assert profile.times.shape == (len(grid.links), N_BINS)
        assert profile.travel_time(1, 8 * 3600) == pytest.approx(400.0 / 13.9)

    def test_floor_at_free_flow(self, grid):
        profile = TravelTimeProfile.free_flow(grid)
        congested = profile.with_times(np.zeros_like(profile.times))
        assert np.allclose(congested.times, profile.times)

    def test_wrong_shape(self, grid):
        profile = TravelTimeProfile.free_flow(grid)
        with pytest.raises(ValueError):
            profile.with_times(np.ones((2, 3)))

    def test_closure_caps_exit_time(self, grid):
        profile = TravelTimeProfile.free_flow(grid)
        times = profile.times.copy()
        times[0, 10] = 2000.0
        congested = profile.with_times(times)
        link = grid.link_ids[0]
        # entering at the end of the slow bin must not beat entering in the next bin
        late = 11 * BIN_SECONDS - 1.0
        assert congested.exit_time(link, late) == pytest.approx(11 * BIN_SECONDS + times[0, 11])

    def test_exit_time_is_fifo(self, grid):
        rng = np.random.default_rng(3)
        profile = TravelTimeProfile.free_flow(grid)
        congested = profile.with_times(profile.times * rng.uniform(1.0, 40.0, size=profile.times.shape))
        starts = np.linspace(0, N_BINS * BIN_SECONDS - 1, 2000)
        for link in grid.link_ids[:6]:
            exits = [congested.exit_time(link, t) for t in starts]
            assert all(b >= a - 1e-9 for a, b in zip(exits, exits[1:]))

    def test_truck_floor(self, grid):
        profile = TravelTimeProfile.free_flow(grid)
        assert profile.travel_time(1, 0.0, 'truck') == pytest.approx(400.0 / (13.9 * 0.9))


class TestRoadRouter:
    """Test road shortest paths."""

    @pytest.mark.parametrize('seed', [1, 2, 3, 4])
    def test_matches_dijkstra(self, seed):
        graph = random_speed_grid(seed)
        profile = TravelTimeProfile.free_flow(graph)
        router = RoadRouter(graph, profile)
        g = nx.DiGraph()
        for link in graph.links.values():
            g.add_edge(link.from_node, link.to_node, weight=link.free_flow_time())
        rng = np.random.default_rng(seed)
        for _ in range(10):
            o, d = (int(v) for v in rng.choice(sorted(graph.nodes), size=2, replace=False))
            plan = router.shortest_path(o, d, 8 * 3600.0)
            expected = nx.dijkstra_path_length(g, o, d)
            assert plan.predicted_total == pytest.approx(expected, rel=1e-9)

    def test_plan_is_contiguous(self, grid):
        plan = shortest_path(grid, TravelTimeProfile.free_flow(grid), 1, 16, 8 * 3600.0)
        assert plan.mode == Mode.DRIVE
        assert plan.legs[0].from_place == 'n:1'
        assert plan.legs[-1].to_place == 'n:16'
        for a, b in zip(plan.legs, plan.legs[1:]):
            assert a.to_place == b.from_place
            assert a.end == pytest.approx(b.start)
        assert plan.distance == pytest.approx(6 * 400.0)

    def test_walk_ignores_direction(self):
        graph = grid_graph(2)
        one_way = {lid: l for lid, l in graph.links.items() if l.from_node < l.to_node}
        graph = graph.replace(links=one_way)
        profile = TravelTimeProfile.free_flow(graph)
        assert shortest_path(graph, profile, 4, 1, 0.0, 'drive') is None
        walk = shortest_path(graph, profile, 4, 1, 0.0, 'walk')
        assert walk.predicted_total == pytest.approx(800.0 / 1.4)

    def test_unknown_node(self, grid):
        with pytest.raises(NetworkError):
            RoadRouter(grid, TravelTimeProfile.free_flow(grid)).shortest_path(1, 999, 0.0)

    def test_congestion_detour(self):
        graph = grid_graph(2)
        profile = TravelTimeProfile.free_flow(graph)
        router = RoadRouter(graph, profile)
        first = router.shortest_path(1, 4, 8 * 3600.0)
        times = profile.times.copy()
        times[graph.link_index[first.link_ids()[0]], :] = 5000.0
        detour = RoadRouter(graph, profile.with_times(times)).shortest_path(1, 4, 8 * 3600.0)
        assert detour.link_ids()[0] != first.link_ids()[0]
        assert detour.predicted_total == pytest.approx(first.predicted_total)

    def test_evaluate_route(self, grid):
        profile = TravelTimeProfile.free_flow(grid)
        router = RoadRouter(grid, profile)
        plan = router.shortest_path(1, 11, 7 * 3600.0)
        again = router.evaluate_route(1, plan.link_ids(), 7 * 3600.0)
        assert again.predicted_total == pytest.approx(plan.predicted_total)
        assert again.destination_node == 11

    def test_tree_reaches_everything(self, grid):
        tree = RoadRouter(grid, TravelTimeProfile.free_flow(grid)).tree(1, 0.0, 'bike')
        assert all(tree.reached(n) for n in grid.nodes)
        assert tree.travel_time(16) == pytest.approx(6 * 400.0 / 4.5)


def label_correcting_arrivals(graph, times, origin, departure):
    """Earliest arrival at every node by repeated relaxation over per-bin link times."""
    out = {}
    for link in graph.links.values():
        if 'auto' in link.modes_allowed:
            out.setdefault(link.from_node, []).append(link)
    arrival = {n: math.inf for n in graph.nodes}
    arrival[origin] = departure
    queue = [origin]
    while queue:
        u = queue.pop(0)
        t = arrival[u]
        b = bin_of(t)
        for link in out.get(u, []):
            row = times[graph.link_index[link.id]]
            # waiting for a later bin is allowed when it exits earlier
            exit_t = min([t + row[b]] + [k * BIN_SECONDS + row[k] for k in range(b + 1, N_BINS)])
            if exit_t < arrival[link.to_node] - 1e-9:
                arrival[link.to_node] = exit_t
                if link.to_node not in queue:
                    queue.append(link.to_node)
    return arrival


def random_profile_graph(seed: int):
    rng = np.random.default_rng(seed)
    graph = random_speed_grid(seed, size=7)
    keep = {lid: l for lid, l in graph.links.items() if rng.random() > 0.15}
    graph = graph.replace(links=keep)
    base = TravelTimeProfile.free_flow(graph)
    profile = base.with_times(base.times * rng.uniform(1.0, 6.0, size=base.times.shape))
    return graph, profile, rng


class TestTimeDependentRoadRouter:
    """Test road search against a label-correcting search on random 96-bin profiles."""

    @pytest.mark.parametrize('seed', range(60))
    def test_matches_label_correcting(self, seed):
        graph, profile, rng = random_profile_graph(seed)
        router = RoadRouter(graph, profile)
        nodes = sorted(graph.nodes)
        for _ in range(5):
            o, d = (int(v) for v in rng.choice(nodes, size=2, replace=False))
            departure = float(rng.uniform(5 * 3600, 20 * 3600))
            expected = label_correcting_arrivals(graph, profile.times, o, departure)[d]
            plan = router.shortest_path(o, d, departure)
            if math.isinf(expected):
                assert plan is None
            else:
                assert plan.arrival == pytest.approx(expected, abs=1e-6)
                assert plan.predicted_total == pytest.approx(expected - departure, abs=1e-6)

    @pytest.mark.parametrize('seed', range(20))
    def test_slower_profile_never_faster(self, seed):
        graph, profile, rng = random_profile_graph(seed)
        fast = RoadRouter(graph, profile)
        slow = RoadRouter(graph, profile.with_times(profile.times * 1.3))
        nodes = sorted(graph.nodes)
        for _ in range(10):
            o, d = (int(v) for v in rng.choice(nodes, size=2, replace=False))
            departure = float(rng.uniform(0, 22 * 3600))
            a, b = fast.shortest_path(o, d, departure), slow.shortest_path(o, d, departure)
            assert (a is None) == (b is None)
            if a is not None:
                assert b.predicted_total >= a.predicted_total - 1e-9


def oracle_arrival(graph, origin, destination, departure):
    """Earliest arrival using one ride on the single line of ``graph``, by enumeration."""
    road = RoadRouter(graph, TravelTimeProfile.free_flow(graph))
    from_origin = road.tree(origin, 0.0, 'walk')
    to_dest = road.tree(destination, 0.0, 'walk')
    pattern = next(iter(graph.patterns.values()))
    nodes = [graph.stops[s].node_id for s in pattern.stop_ids]
    best = math.inf
    for i in range(pattern.n_stops - 1):
        ready = departure + from_origin.travel_time(nodes[i])
        trip = bisect_left(pattern.departure_columns[i], ready)
        if trip >= pattern.n_trips:
            continue
        for j in range(i + 1, pattern.n_stops):
            best = min(best, pattern.arrivals[trip][j] + to_dest.travel_time(nodes[j]))
    return best


def round_based_arrival(graph, origin, destination, departure, max_boardings=3):
    """Earliest arrival with 1..max_boardings rides, scanning every trip once per boarding round."""
    walk = nx.Graph()
    for link in graph.links.values():
        if 'walk' in link.modes_allowed:
            walk.add_edge(link.from_node, link.to_node, weight=link.length / graph.walk_speed)
    from_origin = nx.single_source_dijkstra_path_length(walk, origin)
    to_dest = nx.single_source_dijkstra_path_length(walk, destination)
    ready = {}
    for edge in graph.access_edges:
        if edge.mode == 'walk' and edge.node_id in from_origin:
            t = departure + from_origin[edge.node_id] + edge.time
            ready[edge.stop_id] = min(ready.get(edge.stop_id, math.inf), t)
    best = math.inf
    for _ in range(max_boardings):
        alighted = {}
        for pattern in graph.patterns.values():
            for trip in range(pattern.n_trips):
                for i in range(pattern.n_stops - 1):
                    if pattern.departures[trip][i] < ready.get(pattern.stop_ids[i], math.inf):
                        continue
                    for j in range(i + 1, pattern.n_stops):
                        stop = pattern.stop_ids[j]
                        alighted[stop] = min(alighted.get(stop, math.inf), pattern.arrivals[trip][j])
        for edge in graph.access_edges:
            if edge.mode == 'walk' and edge.stop_id in alighted and edge.node_id in to_dest:
                best = min(best, alighted[edge.stop_id] + edge.time + to_dest[edge.node_id])
        ready = dict(alighted)
        for edge in graph.transfer_edges:
            if edge.from_stop in alighted:
                ready[edge.to_stop] = min(ready.get(edge.to_stop, math.inf), alighted[edge.from_stop] + edge.time)
    return best


def random_transit_grid(seed: int):
    """Grid of at most 49 nodes with one to three random lines and walking transfers between them."""
    rng = np.random.default_rng(seed)
    graph = grid_graph(int(rng.integers(4, 8)))
    nodes = sorted(graph.nodes)
    for n in range(int(rng.integers(1, 4))):
        count = int(rng.integers(2, 7))
        sequence = [int(v) for v in rng.choice(nodes, size=count, replace=False)]
        graph = with_line(graph, sequence, headway=int(rng.choice([180, 300, 600])),
                          first=SIX + int(rng.integers(0, 1800)), last=9 * 3600 + int(rng.integers(0, 3600)),
                          run_time=int(rng.integers(30, 240)), dwell=int(rng.integers(0, 30)), pid=f"R{n}:0")
    transfers = []
    for a in graph.stops.values():
        for b in graph.stops.values():
            distance = math.hypot(a.x - b.x, a.y - b.y)
            if a.id.split('_')[0] != b.id.split('_')[0] and distance <= 400.0 + 1e-9:
                transfers.append(TransferEdge(a.id, b.id, distance, distance / graph.walk_speed + 30.0))
    return graph.replace(transfer_edges=tuple(transfers)), rng


class TestIntermodalRouter:
    """Test walk- and drive-to-transit search."""

    def test_direct_ride(self, grid_with_metro):
        plan = intermodal_path(grid_with_metro, TravelTimeProfile.free_flow(grid_with_metro), 1, 4, SIX)
        assert plan.mode == Mode.WALK_TO_TRANSIT
        assert plan.predicted_total == pytest.approx(120.0)
        assert plan.boardings == 1
        kinds = [leg.kind for leg in plan.legs]
        assert LegKind.BOARD in kinds and LegKind.ALIGHT in kinds

    def test_wait_for_next_departure(self, grid_with_metro):
        plan = intermodal_path(grid_with_metro, TravelTimeProfile.free_flow(grid_with_metro), 1, 4, SIX + 1)
        assert plan.arrival == pytest.approx(SIX + 300 + 120)
        assert plan.wait_time > 0

    @pytest.mark.parametrize('seed', [5, 6, 7])
    def test_matches_enumeration(self, grid_with_metro, seed):
        router = IntermodalRouter(grid_with_metro, TravelTimeProfile.free_flow(grid_with_metro))
        rng = np.random.default_rng(seed)
        for _ in range(15):
            o, d = (int(v) for v in rng.choice(sorted(grid_with_metro.nodes), size=2, replace=False))
            departure = float(rng.uniform(SIX, 9 * 3600))
            plan = router.path(o, d, departure)
            assert plan is not None
            assert plan.arrival == pytest.approx(oracle_arrival(grid_with_metro, o, d, departure), abs=1e-6)

    @pytest.mark.parametrize('seed', range(50))
    def test_matches_round_based_search(self, seed):
        graph, rng = random_transit_grid(seed)
        router = IntermodalRouter(graph, TravelTimeProfile.free_flow(graph))
        nodes = sorted(graph.nodes)
        for _ in range(4):
            o, d = (int(v) for v in rng.choice(nodes, size=2, replace=False))
            departure = float(rng.uniform(SIX - 600, 10.5 * 3600))
            expected = round_based_arrival(graph, o, d, departure)
            plan = router.path(o, d, departure)
            if math.isinf(expected):
                assert plan is None
            else:
                assert plan is not None
                assert plan.arrival == pytest.approx(expected, abs=1e-6)
                assert 1 <= plan.boardings <= 3

    def test_no_trip_after_last_departure(self):
        graph = with_line(grid_graph(3), [1, 2, 3], headway=600, first=1000, last=1000, run_time=60)
        profile = TravelTimeProfile.free_flow(graph)
        assert intermodal_path(graph, profile, 1, 3, 1000.0).arrival == pytest.approx(1120.0)
        assert intermodal_path(graph, profile, 1, 3, 1001.0) is None

    def test_boarding_cap(self):
        graph = with_line(grid_graph(4), [1, 2], headway=300, run_time=40, pid='L:0')
        graph = with_line(graph, [2, 6, 10, 14], headway=300, run_time=40, first=SIX + 60, pid='M:0')
        graph = graph.replace(transfer_edges=(TransferEdge('L_2', 'M_2', 0.0, 0.0),))
        profile = TravelTimeProfile.free_flow(graph)

        two = IntermodalRouter(graph, profile).path(1, 14, SIX)
        assert two.boardings == 2
        assert two.arrival == pytest.approx(SIX + 60 + 120)

        one = IntermodalRouter(graph, profile, RouterParams(max_boardings=1)).path(1, 14, SIX)
        assert one.boardings == 1
        assert one.arrival == pytest.approx(SIX + 360 + 120)

    def test_park_and_ride(self, grid_with_metro):
        plan = TripRouter(grid_with_metro, TravelTimeProfile.free_flow(grid_with_metro)).route(
            'drive_to_transit', 5, 4, SIX)
        assert plan.mode == Mode.DRIVE_TO_TRANSIT
        assert plan.legs[0].kind == LegKind.DRIVE
        assert any(leg.kind == LegKind.PARK for leg in plan.legs)
        assert plan.boardings == 1

    def test_no_transit(self, grid):
        assert intermodal_path(grid, TravelTimeProfile.free_flow(grid), 1, 16, SIX) is None

    def test_bad_access_mode(self, grid_with_metro):
        router = IntermodalRouter(grid_with_metro, TravelTimeProfile.free_flow(grid_with_metro))
        with pytest.raises(NetworkError):
            router.search(1, SIX, access_mode='bike')


class TestLevelOfService:
    """Test LoS tables, the LoS cache and skims."""

    def test_cache_matches_exact_on_bin_start(self, grid_with_metro):
        profile = TravelTimeProfile.free_flow(grid_with_metro)
        exact = mode_levels_of_service(grid_with_metro, profile, 1, 4, 8 * 3600.0)
        cached = LevelOfServiceCache(grid_with_metro, profile).get(1, 4, 8 * 3600.0)
        for mode in (Mode.DRIVE, Mode.WALK, Mode.WALK_TO_TRANSIT):
            assert cached[mode].available == exact[mode].available
            assert cached[mode].total_time == pytest.approx(exact[mode].total_time)

    def test_transit_fare(self, grid_with_metro):
        table = mode_levels_of_service(grid_with_metro, TravelTimeProfile.free_flow(grid_with_metro),
                                       1, 2, 8 * 3600.0)
        assert table[Mode.WALK_TO_TRANSIT].cost == pytest.approx(RouterParams().transit_fare)
        assert table[Mode.DRIVE].cost > 0

    def test_intrazonal_available(self, grid):
        table = mode_levels_of_service(grid, TravelTimeProfile.free_flow(grid), 1, 1, 0.0)
        assert table[Mode.DRIVE].available
        assert not table[Mode.WALK_TO_TRANSIT].available

    def test_static_trees_shared(self, grid_with_metro):
        profile = TravelTimeProfile.free_flow(grid_with_metro)
        shared = {}
        LevelOfServiceCache(grid_with_metro, profile, static_trees=shared).get(1, 4, 8 * 3600.0)
        assert shared
        assert all(key[0] in (Mode.WALK, Mode.BIKE, Mode.WALK_TO_TRANSIT) for key in shared)

    def test_walk_out_of_range(self):
        graph = grid_graph(4, spacing=2000.0)
        table = mode_levels_of_service(graph, TravelTimeProfile.free_flow(graph), 1, 4, 0.0)
        assert not table[Mode.WALK].available
        assert table[Mode.DRIVE].available

    def test_skims(self, grid):
        skims = build_skims(grid, TravelTimeProfile.free_flow(grid))
        assert skims.time(1, 1) == 0.0
        assert skims.time(1, 4) > skims.time(1, 2) > 0
        assert skims.row(1).shape == (len(grid.zone_ids),)
