"""
Simulation parameters (the ``simulation`` block of the run config).
"""

from pydantic import BaseModel, ConfigDict, Field


class SimulationParams(BaseModel):
    """Time step, gridlock handling, replanning thresholds and transit service times."""
    model_config = ConfigDict(extra='forbid')

    dt: float = Field(default=1.0, gt=0, description='seconds; must satisfy dt <= jam_spacing / wave_speed')
    horizon: float = Field(default=30 * 3600.0, gt=0, description='simulation end, seconds from midnight')
    stuck_time: float = Field(default=300.0, gt=0)
    deadlock_timeout: float = Field(default=3600.0, gt=0)
    reroute_factor: float = Field(default=1.5, ge=1.0)
    reroute_min_excess: float = Field(default=60.0, ge=0)
    prevailing_refresh: float = Field(default=300.0, gt=0)
    late_tolerance: float = Field(default=300.0, ge=0)
    patience: float = Field(default=1800.0, gt=0, description='max wait at a stop before giving up')
    min_dwell: float = Field(default=15.0, ge=0)
    board_time: float = Field(default=2.0, ge=0, description='seconds per boarding passenger')
    alight_time: float = Field(default=1.5, ge=0, description='seconds per alighting passenger')
    record_trajectories: bool = False
    trajectory_interval: float = Field(default=60.0, gt=0)
