"""
Equilibrium loop parameters (the ``equilibrium`` block of the run config).
"""

from enum import Enum

from pydantic import BaseModel, ConfigDict, Field, model_validator


class AlphaSchedule(str, Enum):
    MSA = 'msa'
    FIXED = 'fixed'


class EquilibriumParams(BaseModel):
    """Iteration limits, convergence target and the mixing step schedule."""
    model_config = ConfigDict(extra='forbid')

    max_iters: int = Field(default=20, ge=1)
    min_iters: int = Field(default=2, ge=1)
    gap_target: float = Field(default=0.03, ge=0)
    alpha_schedule: AlphaSchedule = AlphaSchedule.MSA
    alpha: float = Field(default=0.3, gt=0, le=1, description='step size when alpha_schedule = fixed')
    oscillation_window: int = Field(default=3, ge=2, description='consecutive gap increases that halve alpha')

    @model_validator(mode='after')
    def _check_iters(self):
        if self.min_iters > self.max_iters:
            raise ValueError('min_iters must not exceed max_iters')
        return self

    def step_size(self, k: int) -> float:
        """Mixing weight of the experienced times after iteration ``k`` (1-based)."""
        if self.alpha_schedule == AlphaSchedule.MSA:
            return 1.0 / k
        return self.alpha
