"""
Economic Impact
===============

Annualized dollar losses of a scenario relative to its baseline.

Components:
-----------
- Value of time: extra car vehicle-hours are valued at ``occupancy * vot_auto``
  per hour; removed transit person-hours are a gain at ``vot_transit``
- Car ownership: added cars times the annual cost of owning one
- Spending: per category, households x per-household spending x the
  baseline-weighted reduction of the activity types mapped to it

Usage:
------
    from analytics.economics import economic_impact, spending_reductions

    reductions = spending_reductions(baseline_counts, scenario_counts, assumptions)
    impact = economic_impact(1.3e6, 0.7e6, 1.9e6, reductions, assumptions)
    impact.grand_total, impact.funding_ratio
"""

import logging
from dataclasses import dataclass, field
from typing import Dict, Mapping, Optional

import pandas as pd

from utils.errors import ConfigError

from .assumptions import EconomicAssumptions

logger = logging.getLogger('analytics.economics')


@dataclass(frozen=True)
class EconomicImpact:
    vot_loss: float
    transit_gain: float
    car_cost: float
    spending: Dict[str, float] = field(default_factory=dict)
    transit_funding: float = 2.7e9

    @property
    def net_vot(self) -> float:
        return self.vot_loss - self.transit_gain

    @property
    def spending_total(self) -> float:
        return sum(self.spending.values())

    @property
    def grand_total(self) -> float:
        return self.net_vot + self.car_cost + self.spending_total

    @property
    def funding_ratio(self) -> float:
        return self.grand_total / self.transit_funding

    def to_dict(self) -> Dict[str, float]:
        return {
            'vot_loss': self.vot_loss,
            'transit_gain': self.transit_gain,
            'net_vot': self.net_vot,
            'car_cost': self.car_cost,
            'spending': dict(self.spending),
            'spending_total': self.spending_total,
            'grand_total': self.grand_total,
            'transit_funding': self.transit_funding,
            'funding_ratio': self.funding_ratio,
        }

    def to_frame(self) -> pd.DataFrame:
        """One row per component in billions of dollars, ending with the grand total."""
        rows = [('value_of_time', 'auto_time_loss', self.vot_loss),
                ('value_of_time', 'transit_time_gain', -self.transit_gain),
                ('value_of_time', 'net', self.net_vot)]
        rows += [('spending', name, v) for name, v in sorted(self.spending.items())]
        rows += [('spending', 'total', self.spending_total),
                 ('car_ownership', 'added_cars', self.car_cost),
                 ('total', 'grand_total', self.grand_total)]
        return pd.DataFrame([(g, c, round(v / 1e9, 6)) for g, c, v in rows],
                            columns=['group', 'component', 'billion_usd'])


def spending_reductions(baseline: Mapping[str, float], scenario: Mapping[str, float],
                        assumptions: Optional[EconomicAssumptions] = None) -> Dict[str, float]:
    """
    Fractional activity reduction per spending category.

    Several activity types mapped to one category are combined with weights
    equal to their baseline counts, i.e. (sum baseline - sum scenario) / sum baseline.
    """
    assumptions = assumptions or EconomicAssumptions()
    base: Dict[str, float] = {}
    scen: Dict[str, float] = {}
    for activity, category in assumptions.category_map.items():
        key = getattr(activity, 'value', activity)
        base[category] = base.get(category, 0.0) + float(baseline.get(key, 0))
        scen[category] = scen.get(category, 0.0) + float(scenario.get(key, 0))
    return {c: ((base[c] - scen[c]) / base[c] if base[c] > 0 else 0.0) for c in sorted(base)}


def economic_impact(vehicle_hours_delta: float, transit_person_hours: float, added_cars: float,
                    reductions: Mapping[str, float], assumptions: Optional[EconomicAssumptions] = None,
                    households: Optional[float] = None) -> EconomicImpact:
    """
    Annual losses from daily deltas.

    ``vehicle_hours_delta``, ``transit_person_hours`` and ``added_cars`` are in
    simulated units and are expanded by ``population_scale``. ``households``
    is used only when the assumptions leave it unset.
    """
    a = assumptions or EconomicAssumptions()
    scale = a.population_scale
    missing = sorted(set(reductions) - set(a.spending))
    unmapped = sorted(set(a.category_map.values()) - set(a.spending))
    if missing or unmapped:
        raise ConfigError(f"No per-household spending for categories {missing or unmapped}")
    n_households = a.households if a.households is not None else households
    if n_households is None:
        raise ConfigError("Household count needed for spending losses (economics.households)")

    vot_loss = vehicle_hours_delta * scale * a.occupancy_auto * a.vot_auto * a.weekdays_per_year
    transit_gain = transit_person_hours * scale * a.vot_transit * a.weekdays_per_year
    car_cost = added_cars * scale * a.annual_car_cost
    spending = {c: n_households * a.spending[c] * r for c, r in sorted(reductions.items())}
    impact = EconomicImpact(vot_loss, transit_gain, car_cost, spending, a.transit_funding)
    logger.info(f"Economic impact: net VOT ${impact.net_vot / 1e9:.2f}B, cars ${car_cost / 1e9:.2f}B, "
                f"spending ${impact.spending_total / 1e9:.2f}B, total ${impact.grand_total / 1e9:.2f}B")
    return impact
