"""
Intermodal Router
=================

Earliest-arrival search for walk-to-transit and drive-to-transit trips over
the label space (place, state):

    A(node)      walking to a stop
    D(node)      driving to a park-and-ride stop
    S(stop, k)   at a stop ready to board, k boardings so far
    X(stop, k)   just alighted after k boardings
    E(node)      walking from the last stop to the destination

Boarding waits for the next scheduled departure of each pattern serving the
stop; riding reaches every downstream stop of the boarded trip.

Usage:
------
    from router.intermodal import IntermodalRouter

    router = IntermodalRouter(graph, profile)
    plan = router.path(origin, destination, departure, access_mode='walk')
"""

import heapq
import logging
import math
from bisect import bisect_left
from dataclasses import dataclass
from typing import Any, Dict, List, Optional, Tuple, Union

from network.model import MultimodalGraph, node_place, stop_place
from utils.errors import NetworkError

from .params import RouterParams
from .plan import LegKind, Leg, Mode, TripPlan, make_plan
from .profile import TravelTimeProfile
from .road import RoadRouter

State = Tuple[Any, ...]

ACCESS_MODES = {'walk': Mode.WALK_TO_TRANSIT, 'drive': Mode.DRIVE_TO_TRANSIT}


@dataclass
class IntermodalTree:
    origin: int
    departure: float
    access_mode: str
    arrival: Dict[State, float]
    pred: Dict[State, Tuple[State, Tuple[Any, ...]]]

    def reached(self, node: int) -> bool:
        return ('E', node) in self.arrival


class IntermodalRouter:
    """
    Transit routing with walk or park-and-ride access and walk egress.
    """

    def __init__(self, graph: MultimodalGraph, profile: TravelTimeProfile,
                 params: Optional[RouterParams] = None, road: Optional[RoadRouter] = None):
        self.graph = graph
        self.profile = profile
        self.params = params or RouterParams()
        self.road = road or RoadRouter(graph, profile, self.params)
        self.logger = logging.getLogger('router.IntermodalRouter')

    def _boardings(self, stop_id: str, ready: float):
        """(pattern, trip, i, j, departure, arrival) for the earliest arrival at each downstream stop."""
        for pid, i in self.graph.stop_patterns.get(stop_id, ()):
            pattern = self.graph.patterns[pid]
            if pattern.is_fifo:
                col = pattern.departure_columns[i]
                trip = bisect_left(col, ready)
                if trip >= pattern.n_trips:
                    continue
                dep = pattern.departures[trip][i]
                arr = pattern.arrivals[trip]
                for j in range(i + 1, pattern.n_stops):
                    yield pattern, trip, i, j, dep, arr[j]
                continue
            for j in range(i + 1, pattern.n_stops):
                best = None
                for trip in range(pattern.n_trips):
                    dep = pattern.departures[trip][i]
                    if dep < ready:
                        continue
                    arr = pattern.arrivals[trip][j]
                    if best is None or arr < best[1]:
                        best = (trip, arr, dep)
                if best is not None:
                    yield pattern, best[0], i, j, best[2], best[1]

    def search(self, origin: int, departure: float, access_mode: str = 'walk',
               target: Optional[int] = None) -> IntermodalTree:
        if access_mode not in ACCESS_MODES:
            raise NetworkError(f"access mode must be walk or drive, got '{access_mode}'")
        g = self.graph
        walk_adj = self.road.adjacency('walk')
        drive_adj = self.road.adjacency('drive')
        row_time = self.profile.row_time
        max_k = self.params.max_boardings

        start: State = ('A', origin) if access_mode == 'walk' else ('D', origin)
        arrival: Dict[State, float] = {start: departure}
        pred: Dict[State, Tuple[State, Tuple[Any, ...]]] = {}
        settled = set()
        frontier = [(departure, 0, start)]
        seq = 1
        goal: Optional[State] = ('E', target) if target is not None else None

        def relax(state: State, t: float, prev: State, how: Tuple[Any, ...]):
            nonlocal seq
            if state not in settled and t < arrival.get(state, math.inf):
                arrival[state] = t
                pred[state] = (prev, how)
                heapq.heappush(frontier, (t, seq, state))
                seq += 1

        if not g.has_transit:
            return IntermodalTree(origin, departure, access_mode, arrival, pred)

        while frontier:
            t, _, state = heapq.heappop(frontier)
            if state in settled:
                continue
            settled.add(state)
            if state == goal:
                break
            tag = state[0]
            if tag in ('A', 'E'):
                node = state[1]
                for v, lid, _, length, fixed in walk_adj.get(node, ()):
                    relax((tag, v), t + fixed, state, ('link', lid, length, LegKind.WALK))
                if tag == 'A':
                    for edge in g.access_by_node.get(node, ()):
                        if edge.mode == 'walk':
                            relax(('S', edge.stop_id, 0), t + edge.time, state, ('access', edge))
            elif tag == 'D':
                node = state[1]
                for v, lid, row, length, _ in drive_adj.get(node, ()):
                    relax(('D', v), t + row_time(row, t, 'car'), state, ('link', lid, length, LegKind.DRIVE))
                for edge in g.access_by_node.get(node, ()):
                    if edge.mode == 'drive':
                        relax(('S', edge.stop_id, 0), t + edge.time, state, ('park', edge))
            elif tag == 'S':
                stop_id, k = state[1], state[2]
                if k >= max_k:
                    continue
                for pattern, trip, i, j, dep, arr in self._boardings(stop_id, t):
                    relax(('X', pattern.stop_ids[j], k + 1), float(arr), state,
                          ('ride', pattern.id, trip, i, j, float(dep)))
            else:
                stop_id, k = state[1], state[2]
                if k < max_k:
                    relax(('S', stop_id, k), t, state, ('stay',))
                    for edge in g.transfers_from.get(stop_id, ()):
                        relax(('S', edge.to_stop, k), t + edge.time, state, ('transfer', edge))
                for edge in g.access_by_stop.get(stop_id, ()):
                    if edge.mode == 'walk':
                        relax(('E', edge.node_id), t + edge.time, state, ('egress', edge))
        return IntermodalTree(origin, departure, access_mode, arrival, pred)

    def _legs(self, tree: IntermodalTree, end: State) -> List[Leg]:
        g = self.graph
        legs: List[Leg] = []
        state = end
        while state in tree.pred:
            prev, how = tree.pred[state]
            t0 = tree.arrival[prev]
            t1 = tree.arrival[state]
            kind = how[0]
            if kind == 'link':
                _, lid, length, leg_kind = how
                legs.append(Leg(leg_kind, t0, t1 - t0, node_place(prev[1]), node_place(state[1]),
                                link_id=lid, distance=length))
            elif kind == 'access':
                edge = how[1]
                legs.append(Leg(LegKind.WALK, t0, t1 - t0, node_place(edge.node_id), stop_place(edge.stop_id),
                                distance=edge.distance))
            elif kind == 'park':
                edge = how[1]
                legs.append(Leg(LegKind.PARK, t0, t1 - t0, node_place(edge.node_id), stop_place(edge.stop_id),
                                distance=edge.distance))
            elif kind == 'egress':
                edge = how[1]
                legs.append(Leg(LegKind.WALK, t0, t1 - t0, stop_place(edge.stop_id), node_place(edge.node_id),
                                distance=edge.distance))
            elif kind == 'transfer':
                edge = how[1]
                legs.append(Leg(LegKind.WALK, t0, t1 - t0, stop_place(edge.from_stop), stop_place(edge.to_stop),
                                distance=edge.distance))
            elif kind == 'ride':
                _, pid, trip, i, j, dep = how
                pattern = g.patterns[pid]
                board, alight = pattern.stop_ids[i], pattern.stop_ids[j]
                a, b = g.stops[board], g.stops[alight]
                ride = [Leg(LegKind.BOARD, dep, 0.0, stop_place(board), stop_place(board),
                            pattern_id=pid, trip_index=trip, stop_index=i),
                        Leg(LegKind.RIDE, dep, t1 - dep, stop_place(board), stop_place(alight),
                            pattern_id=pid, trip_index=trip, stop_index=i, to_stop_index=j,
                            distance=math.hypot(a.x - b.x, a.y - b.y)),
                        Leg(LegKind.ALIGHT, t1, 0.0, stop_place(alight), stop_place(alight),
                            pattern_id=pid, trip_index=trip, stop_index=j)]
                if dep > t0:
                    ride.insert(0, Leg(LegKind.WAIT, t0, dep - t0, stop_place(board), stop_place(board),
                                       pattern_id=pid, stop_index=i))
                legs.extend(reversed(ride))
            state = prev
        legs.reverse()
        return legs

    def plan_from_tree(self, tree: IntermodalTree, destination: int, person_id: Optional[int] = None,
                       activity_id: Optional[int] = None) -> Optional[TripPlan]:
        if not tree.reached(destination):
            return None
        legs = self._legs(tree, ('E', destination))
        return make_plan(ACCESS_MODES[tree.access_mode], tree.departure, legs, tree.origin, destination,
                         self.params, person_id, activity_id)

    def path(self, origin: int, destination: int, departure: float, access_mode: str = 'walk',
             person_id: Optional[int] = None, activity_id: Optional[int] = None) -> Optional[TripPlan]:
        """Earliest-arrival transit plan; ``None`` when no feasible boarding exists."""
        for n in (origin, destination):
            if n not in self.graph.nodes:
                raise NetworkError(f"Unknown node {n}")
        tree = self.search(origin, departure, access_mode, target=destination)
        plan = self.plan_from_tree(tree, destination, person_id, activity_id)
        if plan is None:
            self.logger.debug(f"No {access_mode}-to-transit path {origin} -> {destination} at {departure:.0f}")
        return plan


def intermodal_path(graph: MultimodalGraph, profile: TravelTimeProfile, origin: int, destination: int,
                    departure: float, access_mode: Union[str, Mode] = 'walk',
                    params: Optional[RouterParams] = None) -> Optional[TripPlan]:
    """Walk- or drive-to-transit plan; ``None`` means no path."""
    if isinstance(access_mode, Mode):
        access_mode = 'drive' if access_mode == Mode.DRIVE_TO_TRANSIT else 'walk'
    return IntermodalRouter(graph, profile, params).path(origin, destination, departure, access_mode)
