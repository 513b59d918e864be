"""
Router Package
==============

Time-dependent intermodal shortest paths producing TripPlans.

Modules:
-------
- profile.py: TravelTimeProfile (96 bins, FIFO exit times)
- plan.py: Mode, Leg, TripPlan
- road.py: A* and one-to-all trees on road layers
- intermodal.py: walk/drive-to-transit earliest-arrival search
- los.py: level-of-service tables, LoS cache and skims
- dispatch.py: TripRouter (route any mode)

Usage:
------
    from router import TravelTimeProfile, shortest_path, intermodal_path

    profile = TravelTimeProfile.free_flow(graph)
    plan = shortest_path(graph, profile, 1, 42, departure=8 * 3600, mode='drive')
"""

from .dispatch import TripRouter
from .intermodal import IntermodalRouter, intermodal_path
from .los import LevelOfService, LevelOfServiceCache, Skims, build_skims, mode_levels_of_service
from .params import RouterParams
from .plan import PERSON_MODES, Leg, LegKind, Mode, TripPlan
from .profile import BIN_SECONDS, N_BINS, TravelTimeProfile, bin_of
from .road import RoadRouter, SearchTree, shortest_path

__all__ = [
    'BIN_SECONDS',
    'IntermodalRouter',
    'Leg',
    'LegKind',
    'LevelOfService',
    'LevelOfServiceCache',
    'Mode',
    'N_BINS',
    'PERSON_MODES',
    'RoadRouter',
    'RouterParams',
    'SearchTree',
    'Skims',
    'TravelTimeProfile',
    'TripPlan',
    'TripRouter',
    'bin_of',
    'build_skims',
    'intermodal_path',
    'mode_levels_of_service',
    'shortest_path',
]
