"""
Level of Service
================

Zone-to-zone travel attributes per mode for the choice models.

Purpose:
--------
- ``mode_levels_of_service``: exact LoS table at one departure time
- ``LevelOfServiceCache``: demand-scale LoS from one-to-all trees per
  (origin zone, LoS bin); walk, bike and walk-to-transit trees do not depend
  on road times and may be shared across iterations
- ``build_skims``: zone-to-zone drive times for destination choice

Usage:
------
    from router.los import LevelOfServiceCache, build_skims

    skims = build_skims(graph, profile)
    cache = LevelOfServiceCache(graph, profile, params)
    table = cache.get(origin_zone, destination_zone, departure=8 * 3600)
    table[Mode.DRIVE].in_vehicle
"""

import logging
import math
from dataclasses import dataclass
from typing import Dict, MutableMapping, Optional, Tuple

import numpy as np

from network.model import MultimodalGraph

from .intermodal import IntermodalRouter
from .params import RouterParams
from .plan import PERSON_MODES, Mode, TripPlan
from .profile import TravelTimeProfile
from .road import RoadRouter


@dataclass(frozen=True)
class LevelOfService:
    mode: Mode
    available: bool
    in_vehicle: float = 0.0
    wait: float = 0.0
    walk: float = 0.0
    distance: float = 0.0
    cost: float = 0.0
    boardings: int = 0

    @property
    def total_time(self) -> float:
        return self.in_vehicle + self.wait + self.walk

    @classmethod
    def unavailable(cls, mode: Mode) -> 'LevelOfService':
        return cls(mode=mode, available=False)


def los_from_plan(plan: TripPlan, params: RouterParams) -> LevelOfService:
    cost = params.auto_cost_per_km * plan.drive_distance / 1000.0
    if plan.mode.is_transit and plan.boardings:
        cost += params.transit_fare + params.transfer_fare * (plan.boardings - 1)
    return LevelOfService(mode=plan.mode, available=True, in_vehicle=plan.in_vehicle_time,
                          wait=plan.wait_time, walk=plan.walk_time, distance=plan.distance,
                          cost=cost, boardings=plan.boardings)


def _intrazonal(graph: MultimodalGraph) -> Dict[Mode, LevelOfService]:
    return {m: LevelOfService(mode=m, available=graph.has_transit or not m.is_transit) for m in PERSON_MODES}


def _in_range(graph: MultimodalGraph, o: int, d: int, mode: Mode, params: RouterParams) -> bool:
    if mode == Mode.WALK:
        return graph.distance(o, d) <= params.walk_max_distance
    if mode == Mode.BIKE:
        return graph.distance(o, d) <= params.bike_max_distance
    return True


def mode_levels_of_service(graph: MultimodalGraph, profile: TravelTimeProfile, origin_zone: int,
                           destination_zone: int, departure: float, params: Optional[RouterParams] = None,
                           road: Optional[RoadRouter] = None,
                           transit: Optional[IntermodalRouter] = None) -> Dict[Mode, LevelOfService]:
    """Per-mode LoS between zone centroids; unreachable modes are flagged unavailable."""
    params = params or RouterParams()
    if origin_zone == destination_zone:
        return _intrazonal(graph)
    road = road or RoadRouter(graph, profile, params)
    transit = transit or IntermodalRouter(graph, profile, params, road)
    o = graph.zone_centroids[origin_zone]
    d = graph.zone_centroids[destination_zone]
    table: Dict[Mode, LevelOfService] = {}
    for mode in PERSON_MODES:
        plan = None
        if _in_range(graph, o, d, mode, params):
            if mode.is_transit:
                plan = transit.path(o, d, departure, 'drive' if mode == Mode.DRIVE_TO_TRANSIT else 'walk')
            else:
                plan = road.shortest_path(o, d, departure, mode)
        table[mode] = los_from_plan(plan, params) if plan is not None else LevelOfService.unavailable(mode)
    return table


class LevelOfServiceCache:
    """
    LoS from trees rooted at origin centroids at the start of the LoS bin.

    ``static_trees`` holds walk, bike and walk-to-transit trees; pass the same
    mapping to the caches of later iterations on the same graph.
    """

    def __init__(self, graph: MultimodalGraph, profile: TravelTimeProfile,
                 params: Optional[RouterParams] = None,
                 static_trees: Optional[MutableMapping[Tuple, object]] = None):
        self.graph = graph
        self.profile = profile
        self.params = params or RouterParams()
        self.road = RoadRouter(graph, profile, self.params)
        self.transit = IntermodalRouter(graph, profile, self.params, self.road)
        self.static_trees = static_trees if static_trees is not None else {}
        self._trees: Dict[Tuple, object] = {}
        self.logger = logging.getLogger('router.LevelOfServiceCache')

    def bin_start(self, departure: float) -> float:
        size = self.params.los_bin_seconds
        return float(math.floor(departure / size) * size)

    def _tree(self, mode: Mode, origin: int, t0: float):
        if mode in (Mode.WALK, Mode.BIKE):
            key, store = (mode, origin), self.static_trees
        elif mode == Mode.WALK_TO_TRANSIT:
            key, store = (mode, origin, t0), self.static_trees
        else:
            key, store = (mode, origin, t0), self._trees
        tree = store.get(key)
        if tree is None:
            if mode.is_transit:
                access = 'drive' if mode == Mode.DRIVE_TO_TRANSIT else 'walk'
                tree = self.transit.search(origin, t0, access)
            else:
                tree = self.road.tree(origin, t0, mode)
            store[key] = tree
        return tree

    def plan(self, mode: Mode, origin_zone: int, destination_zone: int, departure: float) -> Optional[TripPlan]:
        o = self.graph.zone_centroids[origin_zone]
        d = self.graph.zone_centroids[destination_zone]
        if not _in_range(self.graph, o, d, mode, self.params):
            return None
        if mode.is_transit and not self.graph.has_transit:
            return None
        tree = self._tree(mode, o, self.bin_start(departure))
        if mode.is_transit:
            return self.transit.plan_from_tree(tree, d)
        return self.road.plan_from_tree(tree, d)

    def get(self, origin_zone: int, destination_zone: int, departure: float) -> Dict[Mode, LevelOfService]:
        if origin_zone == destination_zone:
            return _intrazonal(self.graph)
        table = {}
        for mode in PERSON_MODES:
            plan = self.plan(mode, origin_zone, destination_zone, departure)
            table[mode] = los_from_plan(plan, self.params) if plan is not None else LevelOfService.unavailable(mode)
        return table


@dataclass
class Skims:
    """Zone-to-zone drive times in seconds (inf when unreachable)."""
    zone_ids: Tuple[int, ...]
    times: np.ndarray

    def __post_init__(self):
        self.index = {z: i for i, z in enumerate(self.zone_ids)}

    def time(self, origin_zone: int, destination_zone: int) -> float:
        return float(self.times[self.index[origin_zone], self.index[destination_zone]])

    def row(self, origin_zone: int) -> np.ndarray:
        return self.times[self.index[origin_zone]]


def build_skims(graph: MultimodalGraph, profile: TravelTimeProfile, params: Optional[RouterParams] = None,
                departure: Optional[float] = None) -> Skims:
    params = params or RouterParams()
    departure = params.skim_departure if departure is None else departure
    road = RoadRouter(graph, profile, params)
    zones = graph.zone_ids
    centroids = graph.zone_centroids
    times = np.full((len(zones), len(zones)), np.inf)
    for i, oz in enumerate(zones):
        tree = road.tree(centroids[oz], departure, Mode.DRIVE)
        for j, dz in enumerate(zones):
            times[i, j] = 0.0 if i == j else tree.travel_time(centroids[dz])
    logging.getLogger('router.skims').debug(f"Built {len(zones)}x{len(zones)} drive skims at {departure:.0f}s")
    return Skims(zone_ids=tuple(zones), times=times)
