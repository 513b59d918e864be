"""
Router parameters (the ``router`` block of the run config).
"""

from pydantic import BaseModel, ConfigDict, Field


class RouterParams(BaseModel):
    """Generalized-cost weights, transfer cap, mode ranges and monetary costs."""
    model_config = ConfigDict(extra='forbid')

    ivt_weight: float = Field(default=1.0, gt=0)
    wait_weight: float = Field(default=2.0, gt=0)
    walk_weight: float = Field(default=2.0, gt=0)
    max_boardings: int = Field(default=3, ge=1)
    walk_max_distance: float = Field(default=3000.0, gt=0, description='straight-line metres')
    bike_max_distance: float = Field(default=8000.0, gt=0, description='straight-line metres')
    auto_cost_per_km: float = Field(default=0.35, ge=0)
    transit_fare: float = Field(default=2.25, ge=0)
    transfer_fare: float = Field(default=0.25, ge=0)
    los_bin_seconds: int = Field(default=3600, gt=0)
    skim_departure: float = Field(default=8 * 3600.0, ge=0)
