"""
Day Plans
=========

Per-person pipeline: generate activities, resolve conflicts, choose
destinations along the chain and build the trip chain.

Usage:
------
    from demand.plans import generate_day_plans

    days = generate_day_plans(population, ActivityParams(), ChoiceParams(), skims, seed=7)
    days[person_id].activities, days[person_id].trips
"""

import logging
from dataclasses import dataclass, replace
from typing import Dict, List

import pandas as pd

from utils.parallel import ordered_map
from utils.rng import substream

from .activities import Activity, ActivityParams, generate_activities
from .choice import ChoiceParams, choose_destination
from .population import Person, Population
from .schedule import resolve_conflicts
from .tours import PlannedTrip, build_trip_chain


@dataclass(frozen=True)
class PersonDay:
    person_id: int
    home_zone: int
    activities: List[Activity]
    trips: List[PlannedTrip]

    def activity(self, activity_id: int) -> Activity:
        for a in self.activities:
            if a.id == activity_id:
                return a
        raise KeyError(activity_id)


def plan_person_day(person: Person, home_zone: int, activity_params: ActivityParams,
                    choice_params: ChoiceParams, skims, seed: int) -> PersonDay:
    acts = resolve_conflicts(generate_activities(person, activity_params, seed, home_zone))
    rng = substream(seed, 'destination', person.id)
    located = []
    zone = home_zone
    for act in acts:
        dest = choose_destination(act, zone, skims, choice_params, rng)
        act = replace(act, location_zone=dest)
        located.append(act)
        zone = dest
    trips = build_trip_chain(person.id, located, home_zone, activity_params.return_home_gap)
    return PersonDay(person.id, home_zone, located, trips)


def generate_day_plans(population: Population, activity_params: ActivityParams, choice_params: ChoiceParams,
                       skims, seed: int, workers: int = 1) -> Dict[int, PersonDay]:
    """Day plans for every person; independent of ``workers``."""
    def one(person: Person) -> PersonDay:
        return plan_person_day(person, population.household_of(person).home_zone, activity_params,
                               choice_params, skims, seed)

    days = ordered_map(one, population.persons, workers)
    n_acts = sum(len(d.activities) for d in days)
    logging.getLogger('demand.plans').info(
        f"Planned {n_acts} activities and {sum(len(d.trips) for d in days)} trips for {len(days)} persons")
    return {d.person_id: d for d in days}


def activities_frame(days: Dict[int, PersonDay]) -> pd.DataFrame:
    rows = []
    for pid in sorted(days):
        for a in days[pid].activities:
            rows.append((a.id, a.person_id, a.type.value, a.planned_start, a.planned_duration, a.min_duration,
                         a.latest_end, a.location_zone, a.flexibility.value, int(a.is_care)))
    return pd.DataFrame(rows, columns=['activity_id', 'person_id', 'type', 'planned_start', 'planned_duration',
                                       'min_duration', 'latest_end', 'location_zone', 'flexibility', 'is_care'])
