"""
Demand Package
==============

Synthetic population and daily activity schedules.

Modules:
-------
- population.py: households, persons, vehicle allocation
- activities.py: activity types, timing parameters, generation
- choice.py: destination (MNL) and mode (nested logit) choice
- schedule.py: resolve_conflicts
- tours.py: trip chains
- plans.py: per-person day plans
- trucks.py: background truck trips

Usage:
------
    from demand import PopulationConfig, synthesize_population, generate_day_plans

    population = synthesize_population(PopulationConfig(zone_weights=weights), seed=7)
"""

from .activities import (CARE_TYPES, MANDATORY_TYPES, WORK_SCHOOL_TYPES, Activity, ActivityParams,
                         ActivityType, Flexibility, TypeTiming, generate_activities)
from .choice import (ChoiceParams, NestSpec, choose_destination, choose_mode, destination_probabilities,
                     mode_probabilities, nested_logit_probabilities)
from .plans import PersonDay, activities_frame, generate_day_plans, plan_person_day
from .population import (Gender, Household, Person, Population, PopulationConfig, allocate_vehicles,
                         car_available, synthesize_population)
from .schedule import resolve_conflicts
from .tours import PlannedTrip, build_trip_chain
from .trucks import TruckConfig, TruckTrip, generate_background_trucks

__all__ = [
    'Activity', 'ActivityParams', 'ActivityType', 'CARE_TYPES', 'ChoiceParams', 'Flexibility', 'Gender',
    'Household', 'MANDATORY_TYPES', 'NestSpec', 'Person', 'PersonDay', 'PlannedTrip', 'Population',
    'PopulationConfig', 'TruckConfig', 'TruckTrip', 'TypeTiming', 'WORK_SCHOOL_TYPES', 'activities_frame',
    'allocate_vehicles', 'build_trip_chain', 'car_available', 'choose_destination', 'choose_mode',
    'destination_probabilities', 'generate_activities', 'generate_background_trucks', 'generate_day_plans',
    'mode_probabilities', 'nested_logit_probabilities', 'plan_person_day', 'resolve_conflicts',
    'synthesize_population',
]
