"""
Economic assumptions (the ``economics`` block of the run config).

Per-household spending defaults are back-solved from regional annual losses
and the share of activities lost in each category:

- entertainment:    2.4e9 / (3.8e6 * 0.148)  ~ 4268 $/household/year
- food away:        1.6e9 / (3.8e6 * 0.101)  ~ 4169
- apparel/services: 0.6e9 / (3.8e6 * 0.066)  ~ 2393
"""

from typing import Dict, Optional

from pydantic import BaseModel, ConfigDict, Field, field_validator

from demand.activities import ActivityType


def default_spending() -> Dict[str, float]:
    return {'entertainment': 4268.0, 'food_away': 4169.0, 'apparel_services': 2393.0}


def default_category_map() -> Dict[ActivityType, str]:
    return {
        ActivityType.SHOP_MAJOR: 'apparel_services',
        ActivityType.SHOP_OTHER: 'apparel_services',
        ActivityType.ERRANDS: 'apparel_services',
        ActivityType.LEISURE: 'entertainment',
        ActivityType.EAT_OUT: 'food_away',
    }


class EconomicAssumptions(BaseModel):
    model_config = ConfigDict(extra='forbid')

    vot_auto: float = Field(default=30.0, gt=0, description='$ per person-hour in a car')
    vot_transit: float = Field(default=25.5, gt=0, description='$ per person-hour on transit')
    weekdays_per_year: int = Field(default=261, gt=0)
    occupancy_auto: float = Field(default=1.48, gt=0)
    annual_car_cost: float = Field(default=10728.0, gt=0)
    households: Optional[float] = Field(default=3.8e6, gt=0,
                                        description='households spending is scaled to; null = synthetic count')
    population_scale: float = Field(default=1.0, gt=0,
                                    description='expansion from simulated to real hours and cars')
    transit_funding: float = Field(default=2.7e9, gt=0, description='annual transit operating funding, $')
    spending: Dict[str, float] = Field(default_factory=default_spending)
    category_map: Dict[ActivityType, str] = Field(default_factory=default_category_map)

    @field_validator('spending')
    @classmethod
    def _check_spending(cls, v):
        if any(x <= 0 for x in v.values()):
            raise ValueError('per-household spending must be positive')
        return v
