"""
Road Router
===========

Time-dependent label-setting search over the roadway layers.

Purpose:
--------
- Drive, truck and bus paths over directed links with profile times
- Walk and bike paths over undirected links at fixed speeds
- Point-to-point A* and one-to-all trees

Usage:
------
    from router.road import RoadRouter

    router = RoadRouter(graph, profile)
    plan = router.shortest_path(origin, destination, departure=8 * 3600, mode='drive')
    tree = router.tree(origin, departure=8 * 3600, mode='drive')

Key Features:
------------
- Heuristic = straight-line distance / network max speed (admissible)
- Exact under FIFO link exit times
- Read-only over graph and profile; every query has its own labels
"""

import heapq
import logging
import math
from dataclasses import dataclass
from functools import cached_property
from typing import Dict, List, Optional, Tuple, Union

from network.model import MultimodalGraph, node_place
from utils.errors import NetworkError

from .params import RouterParams
from .plan import LegKind, Leg, Mode, TripPlan, make_plan
from .profile import TravelTimeProfile

# mode -> (link token, vehicle class, directed)
ROAD_LAYERS: Dict[str, Tuple[str, Optional[str], bool]] = {
    'drive': ('auto', 'car', True),
    'truck': ('truck', 'truck', True),
    'bus': ('bus', 'bus', True),
    'walk': ('walk', None, False),
    'bike': ('bike', None, False),
}

LEG_KINDS = {'drive': LegKind.DRIVE, 'truck': LegKind.DRIVE, 'bus': LegKind.DRIVE,
             'walk': LegKind.WALK, 'bike': LegKind.BIKE}

# (next node, link id, profile row, length, fixed time or None)
Arc = Tuple[int, int, int, float, Optional[float]]


def layer_key(mode: Union[Mode, str]) -> str:
    key = getattr(mode, 'value', mode)
    if key not in ROAD_LAYERS:
        raise NetworkError(f"'{key}' is not a road mode")
    return key


@dataclass
class SearchTree:
    """
    Labels of one search: ``arrival[node]`` and ``pred[node] = (prev, link, enter, duration, length)``.
    """
    origin: int
    departure: float
    mode: str
    arrival: Dict[int, float]
    pred: Dict[int, Tuple[int, int, float, float, float]]

    def reached(self, node: int) -> bool:
        return node in self.arrival

    def travel_time(self, node: int) -> float:
        return self.arrival.get(node, math.inf) - self.departure

    def legs_to(self, node: int) -> List[Leg]:
        kind = LEG_KINDS[self.mode]
        legs = []
        while node != self.origin:
            prev, link_id, enter, duration, length = self.pred[node]
            legs.append(Leg(kind, enter, duration, node_place(prev), node_place(node),
                            link_id=link_id, distance=length))
            node = prev
        legs.reverse()
        return legs


class RoadRouter:
    """
    Shortest paths on the road layers of ``graph`` under ``profile``.
    """

    def __init__(self, graph: MultimodalGraph, profile: TravelTimeProfile,
                 params: Optional[RouterParams] = None):
        self.graph = graph
        self.profile = profile
        self.params = params or RouterParams()
        self.logger = logging.getLogger('router.RoadRouter')
        self._adjacency: Dict[str, Dict[int, Tuple[Arc, ...]]] = {}
        self._vmax: Dict[str, float] = {}

    def adjacency(self, mode: str) -> Dict[int, Tuple[Arc, ...]]:
        if mode not in self._adjacency:
            token, _, directed = ROAD_LAYERS[mode]
            speed = self.graph.bike_speed if mode == 'bike' else self.graph.walk_speed
            index = self.profile.index
            adj: Dict[int, List[Arc]] = {}
            for lid in sorted(self.graph.links):
                link = self.graph.links[lid]
                if not link.allows(token):
                    continue
                if directed:
                    adj.setdefault(link.from_node, []).append(
                        (link.to_node, lid, index[lid], link.length, None))
                else:
                    t = link.length / speed
                    adj.setdefault(link.from_node, []).append((link.to_node, lid, index[lid], link.length, t))
                    adj.setdefault(link.to_node, []).append((link.from_node, lid, index[lid], link.length, t))
            self._adjacency[mode] = {k: tuple(v) for k, v in adj.items()}
        return self._adjacency[mode]

    @cached_property
    def _min_times(self) -> Dict[str, List[float]]:
        return {cls: self.profile.min_times(cls).tolist() for cls in ('car', 'truck', 'bus')}

    def max_speed(self, mode: str) -> float:
        """Largest straight-line speed any link of the layer allows."""
        if mode not in self._vmax:
            _, cls, directed = ROAD_LAYERS[mode]
            nodes = self.graph.nodes
            vmax = 0.0
            for u, arcs in self.adjacency(mode).items():
                for v, _, row, _, fixed in arcs:
                    t = fixed if fixed is not None else self._min_times[cls][row]
                    if t > 0:
                        vmax = max(vmax, nodes[u].distance_to(nodes[v]) / t)
            self._vmax[mode] = vmax
        return self._vmax[mode]

    def _search(self, origin: int, departure: float, mode: str, target: Optional[int] = None) -> SearchTree:
        adj = self.adjacency(mode)
        cls = ROAD_LAYERS[mode][1]
        row_time = self.profile.row_time
        nodes = self.graph.nodes
        if target is not None and self.max_speed(mode) > 0:
            goal = nodes[target]
            inv = 1.0 / self.max_speed(mode)

            def h(n: int) -> float:
                node = nodes[n]
                return math.hypot(node.x - goal.x, node.y - goal.y) * inv
        else:
            def h(n: int) -> float:
                return 0.0

        arrival = {origin: departure}
        pred: Dict[int, Tuple[int, int, float, float, float]] = {}
        settled = set()
        frontier = [(departure + h(origin), 0, origin)]
        seq = 1
        while frontier:
            _, _, u = heapq.heappop(frontier)
            if u in settled:
                continue
            settled.add(u)
            if u == target:
                break
            tu = arrival[u]
            for v, lid, row, length, fixed in adj.get(u, ()):
                if v in settled:
                    continue
                duration = fixed if fixed is not None else row_time(row, tu, cls)
                tv = tu + duration
                if tv < arrival.get(v, math.inf):
                    arrival[v] = tv
                    pred[v] = (u, lid, tu, duration, length)
                    heapq.heappush(frontier, (tv + h(v), seq, v))
                    seq += 1
        return SearchTree(origin, departure, mode, arrival, pred)

    def tree(self, origin: int, departure: float, mode: Union[Mode, str]) -> SearchTree:
        """One-to-all labels from ``origin``."""
        return self._search(origin, departure, layer_key(mode))

    def shortest_path(self, origin: int, destination: int, departure: float,
                      mode: Union[Mode, str] = Mode.DRIVE, person_id: Optional[int] = None,
                      activity_id: Optional[int] = None) -> Optional[TripPlan]:
        """
        Earliest-arrival path; ``None`` when unreachable.

        Raises:
            NetworkError: unknown origin or destination node
        """
        key = layer_key(mode)
        for n in (origin, destination):
            if n not in self.graph.nodes:
                raise NetworkError(f"Unknown node {n}")
        result = self._search(origin, departure, key, target=destination)
        if not result.reached(destination):
            self.logger.debug(f"No {key} path {origin} -> {destination} at {departure:.0f}")
            return None
        return self.plan_from_tree(result, destination, person_id, activity_id)

    def plan_from_tree(self, tree: SearchTree, destination: int, person_id: Optional[int] = None,
                       activity_id: Optional[int] = None) -> Optional[TripPlan]:
        if not tree.reached(destination):
            return None
        return make_plan(self.plan_mode(tree.mode), tree.departure, tree.legs_to(destination),
                         tree.origin, destination, self.params, person_id, activity_id)

    def evaluate_route(self, origin: int, link_ids: List[int], departure: float,
                       mode: Union[Mode, str] = Mode.DRIVE, person_id: Optional[int] = None,
                       activity_id: Optional[int] = None) -> TripPlan:
        """Time a fixed link sequence from ``departure`` under this router's profile."""
        key = layer_key(mode)
        cls = ROAD_LAYERS[key][1]
        speed = self.graph.bike_speed if key == 'bike' else self.graph.walk_speed
        kind = LEG_KINDS[key]
        legs = []
        t = departure
        node = origin
        for lid in link_ids:
            link = self.graph.links[lid]
            if cls is None:
                duration = link.length / speed
                nxt = link.to_node if link.from_node == node else link.from_node
            else:
                duration = self.profile.row_time(self.profile.index[lid], t, cls)
                nxt = link.to_node
            legs.append(Leg(kind, t, duration, node_place(node), node_place(nxt), link_id=lid,
                            distance=link.length))
            t += duration
            node = nxt
        return make_plan(self.plan_mode(key), departure, legs, origin, node, self.params,
                         person_id, activity_id)

    @staticmethod
    def plan_mode(key: str) -> Mode:
        return Mode.DRIVE if key == 'bus' else Mode(key)

    def __repr__(self) -> str:
        return f"RoadRouter(nodes={len(self.graph.nodes)}, links={len(self.graph.links)})"


def shortest_path(graph: MultimodalGraph, profile: TravelTimeProfile, origin: int, destination: int,
                  departure: float, mode: Union[Mode, str] = Mode.DRIVE,
                  params: Optional[RouterParams] = None) -> Optional[TripPlan]:
    """Unimodal earliest-arrival path; ``None`` means no path."""
    return RoadRouter(graph, profile, params).shortest_path(origin, destination, departure, mode)
