"""
Background truck demand: exogenous truck trips between random truck-network
nodes, departing by an hourly histogram.
"""

import logging
from dataclasses import dataclass
from typing import List, Sequence

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator

from utils.rng import substream


def _default_hourly() -> List[float]:
    # daytime-heavy freight profile
    return [0.5, 0.4, 0.4, 0.5, 0.8, 1.5, 2.5, 3.0, 3.0, 3.0, 3.0, 3.0,
            3.0, 3.0, 3.0, 2.8, 2.5, 2.2, 1.8, 1.4, 1.1, 0.9, 0.7, 0.6]


class TruckConfig(BaseModel):
    model_config = ConfigDict(extra='forbid')

    trips: int = Field(default=0, ge=0)
    hourly_weights: List[float] = Field(default_factory=_default_hourly)

    @field_validator('hourly_weights')
    @classmethod
    def _check(cls, v):
        if len(v) != 24 or any(w < 0 for w in v) or sum(v) <= 0:
            raise ValueError('hourly_weights needs 24 non-negative weights with positive sum')
        return v


@dataclass(frozen=True)
class TruckTrip:
    id: int
    origin_node: int
    destination_node: int
    departure: float


def generate_background_trucks(nodes: Sequence[int], config: TruckConfig, seed: int) -> List[TruckTrip]:
    """``config.trips`` trucks with distinct random origin and destination nodes."""
    if config.trips == 0 or len(nodes) < 2:
        return []
    rng = substream(seed, 'trucks')
    pool = np.asarray(sorted(nodes))
    weights = np.asarray(config.hourly_weights, dtype=float)
    hours = rng.choice(24, size=config.trips, p=weights / weights.sum())
    trips = []
    for k in range(config.trips):
        o, d = rng.choice(len(pool), size=2, replace=False)
        departure = float(round((hours[k] + rng.random()) * 3600.0))
        trips.append(TruckTrip(id=k + 1, origin_node=int(pool[o]), destination_node=int(pool[d]),
                               departure=departure))
    trips.sort(key=lambda t: (t.departure, t.id))
    logging.getLogger('demand.trucks').info(f"Generated {len(trips)} background truck trips")
    return trips
