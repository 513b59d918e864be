"""
Mode dispatch over the road and intermodal routers.
"""

from typing import Optional, Union

from network.model import MultimodalGraph

from .intermodal import IntermodalRouter
from .params import RouterParams
from .plan import Mode, TripPlan
from .profile import TravelTimeProfile
from .road import RoadRouter


class TripRouter:
    """Exact routing of one trip by mode at its actual departure."""

    def __init__(self, graph: MultimodalGraph, profile: TravelTimeProfile,
                 params: Optional[RouterParams] = None):
        self.graph = graph
        self.profile = profile
        self.params = params or RouterParams()
        self.road = RoadRouter(graph, profile, self.params)
        self.transit = IntermodalRouter(graph, profile, self.params, self.road)

    def route(self, mode: Union[Mode, str], origin: int, destination: int, departure: float,
              person_id: Optional[int] = None, activity_id: Optional[int] = None) -> Optional[TripPlan]:
        mode = Mode(mode)
        if mode.is_transit:
            access = 'drive' if mode == Mode.DRIVE_TO_TRANSIT else 'walk'
            return self.transit.path(origin, destination, departure, access, person_id, activity_id)
        return self.road.shortest_path(origin, destination, departure, mode, person_id, activity_id)

    def with_profile(self, profile: TravelTimeProfile) -> 'TripRouter':
        return TripRouter(self.graph, profile, self.params)
