"""
Network build parameters (the ``network`` block of the run config).
"""

from datetime import date
from typing import Dict

from pydantic import BaseModel, ConfigDict, Field, field_validator

from .model import DEFAULT_CLASS_FACTORS, TransitMode


class VehicleCapacity(BaseModel):
    model_config = ConfigDict(extra='forbid')

    seat: int = Field(gt=0)
    crush: int = Field(gt=0)

    @field_validator('crush')
    @classmethod
    def _crush_ge_seat(cls, v, info):
        seat = info.data.get('seat')
        if seat is not None and v < seat:
            raise ValueError('crush capacity must be >= seat capacity')
        return v


def _default_capacity() -> Dict[TransitMode, VehicleCapacity]:
    return {
        TransitMode.BUS: VehicleCapacity(seat=40, crush=70),
        TransitMode.METRO_RAIL: VehicleCapacity(seat=300, crush=800),
        TransitMode.COMMUTER_RAIL: VehicleCapacity(seat=600, crush=1000),
    }


class NetworkParams(BaseModel):
    """Parameters of ``parse_gtfs`` and ``build_graph``."""
    model_config = ConfigDict(extra='forbid')

    service_date: date = date(2025, 10, 7)
    walk_speed: float = Field(default=1.4, gt=0)
    bike_speed: float = Field(default=4.5, gt=0)
    max_access_walk: float = Field(default=800.0, gt=0)
    park_time: float = Field(default=120.0, ge=0, description='seconds to park at a park-and-ride lot')
    capacity_scale: float = Field(default=1.0, gt=0, le=1,
                                  description='share of real traffic the simulated population stands for')
    class_factors: Dict[str, tuple] = Field(
        default_factory=lambda: {k: tuple(v) for k, v in DEFAULT_CLASS_FACTORS.items()})
    transit_capacity: Dict[TransitMode, VehicleCapacity] = Field(default_factory=_default_capacity)

    @field_validator('class_factors')
    @classmethod
    def _check_factors(cls, v):
        out = {}
        for key, pair in v.items():
            if key not in DEFAULT_CLASS_FACTORS:
                raise ValueError(f"unknown vehicle class '{key}'")
            ffs, jam = (float(pair[0]), float(pair[1]))
            if ffs <= 0 or jam <= 0:
                raise ValueError(f"class factors for '{key}' must be positive")
            out[key] = (ffs, jam)
        return out
