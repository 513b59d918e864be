"""
Travel-time profiles: expected link times in 96 fifteen-minute bins.

Link times are piecewise constant by entry-time bin. ``exit_time`` applies a
FIFO closure so that entering later never means leaving earlier:

    exit(t) = min(t + tau[b(t)], min_{b' > b(t)} (b' * 900 + tau[b']))
"""

from functools import cached_property
from typing import Dict, List, Optional, Sequence, Union

import numpy as np

from network.model import MultimodalGraph, VehicleClass

BIN_SECONDS = 900
N_BINS = 96


def bin_of(t: float) -> int:
    """Bin index of time ``t`` clamped to [0, 95]."""
    b = int(t // BIN_SECONDS)
    if b < 0:
        return 0
    if b >= N_BINS:
        return N_BINS - 1
    return b


class TravelTimeProfile:
    """
    Per-link expected car travel times (seconds), shape (n_links, 96).

    Entries are floored at free-flow time on construction.
    """

    def __init__(self, link_ids: Sequence[int], times: np.ndarray, free_flow: np.ndarray,
                 class_free_flow: Optional[Dict[str, np.ndarray]] = None):
        self.link_ids = tuple(int(i) for i in link_ids)
        self.index: Dict[int, int] = {lid: i for i, lid in enumerate(self.link_ids)}
        self.free_flow_times = np.asarray(free_flow, dtype=float)
        times = np.asarray(times, dtype=float)
        if times.shape != (len(self.link_ids), N_BINS):
            raise ValueError(f"profile shape {times.shape} != ({len(self.link_ids)}, {N_BINS})")
        self.times = np.maximum(times, self.free_flow_times[:, None])
        self.class_free_flow = class_free_flow or {}

    @classmethod
    def free_flow(cls, graph: MultimodalGraph) -> 'TravelTimeProfile':
        ff = np.array([graph.links[l].free_flow_time(VehicleClass.CAR) for l in graph.link_ids], dtype=float)
        class_ff = {
            c.value: np.array([graph.links[l].free_flow_time(c) for l in graph.link_ids], dtype=float)
            for c in VehicleClass
        }
        return cls(graph.link_ids, np.repeat(ff[:, None], N_BINS, axis=1), ff, class_ff)

    def with_times(self, times: np.ndarray) -> 'TravelTimeProfile':
        return TravelTimeProfile(self.link_ids, times, self.free_flow_times, self.class_free_flow)

    def copy(self) -> 'TravelTimeProfile':
        return self.with_times(self.times.copy())

    @cached_property
    def closure(self) -> np.ndarray:
        arrive = self.times + np.arange(N_BINS, dtype=float)[None, :] * BIN_SECONDS
        suffix = np.minimum.accumulate(arrive[:, ::-1], axis=1)[:, ::-1]
        out = np.full_like(arrive, np.inf)
        out[:, :-1] = suffix[:, 1:]
        return out

    @cached_property
    def _times_rows(self) -> List[List[float]]:
        return self.times.tolist()

    @cached_property
    def _closure_rows(self) -> List[List[float]]:
        return self.closure.tolist()

    @cached_property
    def _class_rows(self) -> Dict[str, List[float]]:
        return {k: v.tolist() for k, v in self.class_free_flow.items()}

    def exit_time_row(self, row: int, t: float) -> float:
        b = bin_of(t)
        exit_t = t + self._times_rows[row][b]
        cap = self._closure_rows[row][b]
        return cap if cap < exit_t else exit_t

    def row_time(self, row: int, t: float, vehicle_class: str = 'car') -> float:
        """Traversal time of profile row ``row`` entered at ``t``."""
        duration = self.exit_time_row(row, t) - t
        if vehicle_class != 'car' and vehicle_class in self._class_rows:
            floor = self._class_rows[vehicle_class][row]
            if floor > duration:
                return floor
        return duration

    def exit_time(self, link_id: int, t: float) -> float:
        return self.exit_time_row(self.index[link_id], t)

    def travel_time(self, link_id: int, t: float,
                    vehicle_class: Union[VehicleClass, str] = VehicleClass.CAR) -> float:
        return self.row_time(self.index[link_id], t, VehicleClass(vehicle_class).value)

    def min_times(self, vehicle_class: Union[VehicleClass, str] = VehicleClass.CAR) -> np.ndarray:
        """Lower bound of the traversal time of each link over all entry times."""
        base = self.times.min(axis=1)
        key = VehicleClass(vehicle_class).value
        if key != 'car' and key in self.class_free_flow:
            return np.maximum(base, self.class_free_flow[key])
        return base

    def __eq__(self, other) -> bool:
        return (isinstance(other, TravelTimeProfile) and self.link_ids == other.link_ids
                and np.array_equal(self.times, other.times))

    __hash__ = None  # type: ignore[assignment]
