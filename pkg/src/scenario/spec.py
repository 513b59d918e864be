"""
Scenario definitions (the ``scenarios`` list of the run config).
"""

from enum import Enum
from typing import Any, Dict, List, Union

from pydantic import BaseModel, ConfigDict, Field, model_validator

BASELINE = 'baseline'


class OwnershipRule(str, Enum):
    NONE = 'none'
    BUY_UP_TO_TWO = 'buy_up_to_two'


class ScenarioSpec(BaseModel):
    """
    A named scenario: transforms of the baseline inputs plus reporting masks.

    ``transit_removal`` is ``True`` for every agency or a list of agency ids.
    """
    model_config = ConfigDict(extra='forbid')

    name: str = Field(min_length=1)
    transit_removal: Union[bool, List[str]] = False
    ownership_rule: OwnershipRule = OwnershipRule.NONE
    choice_overrides: Dict[str, Any] = Field(default_factory=dict)
    simulation_overrides: Dict[str, Any] = Field(default_factory=dict)
    masks: Dict[str, List[int]] = Field(default_factory=dict)

    @property
    def removes_transit(self) -> bool:
        return bool(self.transit_removal)

    @property
    def has_transforms(self) -> bool:
        return (self.removes_transit or self.ownership_rule != OwnershipRule.NONE
                or bool(self.choice_overrides) or bool(self.simulation_overrides))

    @model_validator(mode='after')
    def _baseline_is_untransformed(self):
        if self.name == BASELINE and self.has_transforms:
            raise ValueError('the baseline scenario cannot carry transforms')
        return self


def default_scenarios() -> List[ScenarioSpec]:
    return [
        ScenarioSpec(name=BASELINE),
        ScenarioSpec(name='transit_removal', transit_removal=True, ownership_rule=OwnershipRule.BUY_UP_TO_TWO),
    ]
