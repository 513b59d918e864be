"""
Information mixing and convergence measurement.

``mix_times`` blends historical and experienced link times:

    h' = (1 - alpha) * h + alpha * e      (floored at free-flow)

``relative_gap`` compares each drive trip's experienced route cost with the
best route under the same experienced times:

    gap = sum(max(c_exp - c_best, 0)) / sum(c_best)

Both costs are evaluated at the start of the trip's 15-minute departure bin.
"""

import math
from typing import Dict, Iterable, Optional, Sequence, Tuple

import numpy as np

from network.model import MultimodalGraph
from router.params import RouterParams
from router.plan import Mode
from router.profile import BIN_SECONDS, TravelTimeProfile
from router.road import RoadRouter, SearchTree
from utils.errors import ConfigError


def mix_times(historical: TravelTimeProfile, experienced: TravelTimeProfile, alpha: float) -> TravelTimeProfile:
    """
    Raises:
        ConfigError: alpha outside (0, 1] or profiles over different links
    """
    if not 0.0 < alpha <= 1.0:
        raise ConfigError(f"mixing alpha must be in (0, 1], got {alpha}")
    if historical.link_ids != experienced.link_ids:
        raise ConfigError('cannot mix profiles over different links')
    if alpha == 1.0:
        return historical.with_times(experienced.times.copy())
    return historical.with_times((1.0 - alpha) * historical.times + alpha * experienced.times)


def gap_from_costs(experienced: Iterable[float], best: Iterable[float]) -> float:
    experienced = np.asarray(list(experienced), dtype=float)
    best = np.asarray(list(best), dtype=float)
    denominator = best.sum()
    if denominator <= 0:
        return 0.0
    return float(np.maximum(experienced - best, 0.0).sum() / denominator)


def _bin_start(t: float) -> float:
    return math.floor(t / BIN_SECONDS) * BIN_SECONDS


def relative_gap(trips: Sequence, experienced: TravelTimeProfile, graph: MultimodalGraph,
                 params: Optional[RouterParams] = None) -> float:
    """
    Relative gap over arrived drive trips (``TripRecord`` objects with links).
    Best responses come from one-to-all trees shared by trips with the same
    origin and departure bin.
    """
    road = RoadRouter(graph, experienced, params or RouterParams())
    trees: Dict[Tuple[int, float], SearchTree] = {}
    exp_costs, best_costs = [], []
    for trip in trips:
        if trip.mode != Mode.DRIVE or trip.arrival is None or not trip.links:
            continue
        t0 = _bin_start(trip.departure)
        key = (trip.origin_node, t0)
        if key not in trees:
            trees[key] = road.tree(trip.origin_node, t0, Mode.DRIVE)
        used = road.evaluate_route(trip.origin_node, trip.links, t0)
        best = trees[key].travel_time(used.destination_node)
        if not math.isfinite(best):
            continue
        exp_costs.append(used.predicted_total)
        best_costs.append(best)
    return gap_from_costs(exp_costs, best_costs)
