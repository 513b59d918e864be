"""
Scenario Package
================

Declarative scenarios and the pure transforms they apply.

Usage:
------
    from scenario import ScenarioSpec, apply_scenario

    spec = ScenarioSpec(name='transit_removal', transit_removal=True, ownership_rule='buy_up_to_two')
    graph2, population2 = apply_scenario(spec, graph, population)
"""

from .spec import BASELINE, OwnershipRule, ScenarioSpec, default_scenarios
from .transforms import (apply_ownership_rule, apply_population_rule, apply_scenario,
                         apply_transit_removal)

__all__ = [
    'BASELINE',
    'OwnershipRule',
    'ScenarioSpec',
    'apply_ownership_rule',
    'apply_population_rule',
    'apply_scenario',
    'apply_transit_removal',
    'default_scenarios',
]
