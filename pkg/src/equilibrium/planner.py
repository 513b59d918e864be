"""
Trip Planner
============

Turns frozen day plans into routed ``TravelerDay`` inputs for one iteration.

Purpose:
--------
- Mode choice per trip from the level-of-service cache of the current
  historical profile, with common random numbers across iterations
- Exact routing of the chosen mode at the trip's departure
- Departure = arrive-by minus the chosen mode's travel time (activity trips)
  or the end of the previous activity (home trips)
- Truck plans on the truck layer

Usage:
------
    from equilibrium.planner import TripPlanner

    planner = TripPlanner(graph, population, choice_params, router_params, seed=7)
    travelers = planner.plan_days(days, profile, workers=4)
"""

import logging
from typing import Dict, List, MutableMapping, Optional, Sequence, Tuple

from demand.choice import ChoiceParams, choose_mode
from demand.plans import PersonDay
from demand.population import Population
from demand.trucks import TruckTrip
from network.model import MultimodalGraph
from router.dispatch import TripRouter
from router.los import LevelOfServiceCache
from router.params import RouterParams
from router.plan import PERSON_MODES, Mode, TripPlan
from router.profile import TravelTimeProfile
from simcore.day import TravelerDay, TripAssignment
from simcore.replan import fastest_plan
from utils.errors import UntravelableTrip
from utils.parallel import ordered_map
from utils.rng import substream


def available_modes(has_car: bool) -> Tuple[Mode, ...]:
    return tuple(m for m in PERSON_MODES if has_car or not m.uses_car)


class TripPlanner:
    """Mode choice and routing for every person's trips under one profile."""

    def __init__(self, graph: MultimodalGraph, population: Population, choice_params: ChoiceParams,
                 router_params: Optional[RouterParams] = None, seed: int = 0,
                 static_trees: Optional[MutableMapping] = None):
        self.graph = graph
        self.population = population
        self.choice_params = choice_params
        self.router_params = router_params or RouterParams()
        self.seed = seed
        self.static_trees = static_trees if static_trees is not None else {}
        self.logger = logging.getLogger('equilibrium.TripPlanner')

    def plan_person(self, day: PersonDay, cache: LevelOfServiceCache, router: TripRouter) -> TravelerDay:
        person = self.population.person(day.person_id)
        modes = available_modes(self.population.car_available(person))
        centroids = self.graph.zone_centroids
        assignments: List[TripAssignment] = []
        for trip in day.trips:
            o, d = centroids[trip.origin_zone], centroids[trip.destination_zone]
            guess = trip.depart_after if trip.is_home else trip.arrive_by
            table = cache.get(trip.origin_zone, trip.destination_zone, guess)
            rng = substream(self.seed, 'mode', day.person_id, trip.index)
            context = {'person_id': day.person_id, 'trip_index': trip.index}
            try:
                mode = choose_mode(table, modes, self.choice_params, rng, context)
            except UntravelableTrip:
                assignments.append(TripAssignment(trip, None, None, guess))
                continue
            if trip.is_home:
                departure = trip.depart_after
            else:
                departure = max(0.0, trip.arrive_by - table[mode].total_time)
            plan = router.route(mode, o, d, departure, day.person_id, trip.activity_id)
            if plan is None:
                plan = fastest_plan(router, modes, o, d, departure, day.person_id, trip.activity_id, prefer=mode)
            if plan is None:
                assignments.append(TripAssignment(trip, None, None, departure))
                continue
            assignments.append(TripAssignment(trip, plan.mode, plan, departure))
        home = centroids[self.population.household_of(person).home_zone]
        return TravelerDay(day.person_id, home, tuple(day.activities), tuple(assignments), modes)

    def plan_days(self, days: Dict[int, PersonDay], profile: TravelTimeProfile,
                  workers: int = 1) -> List[TravelerDay]:
        cache = LevelOfServiceCache(self.graph, profile, self.router_params, self.static_trees)
        router = TripRouter(self.graph, profile, self.router_params)
        travelers = ordered_map(lambda pid: self.plan_person(days[pid], cache, router), sorted(days), workers)
        counts: Dict[str, int] = {}
        for traveler in travelers:
            for a in traveler.trips:
                key = a.mode.value if a.mode is not None else 'untravelable'
                counts[key] = counts.get(key, 0) + 1
        self.logger.info(f"Planned trips for {len(travelers)} travelers: {dict(sorted(counts.items()))}")
        return travelers

    def plan_trucks(self, trucks: Sequence[TruckTrip], profile: TravelTimeProfile) -> List[Tuple[TruckTrip, TripPlan]]:
        router = TripRouter(self.graph, profile, self.router_params)
        planned = []
        for truck in trucks:
            plan = router.road.shortest_path(truck.origin_node, truck.destination_node, truck.departure, Mode.TRUCK)
            if plan is not None and plan.legs:
                planned.append((truck, plan))
        if len(planned) < len(trucks):
            self.logger.warning(f"{len(trucks) - len(planned)} truck trips have no truck path and were skipped")
        return planned
