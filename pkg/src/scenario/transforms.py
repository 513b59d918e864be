"""
Scenario Transforms
===================

Pure functions over baseline inputs; inputs are never mutated.

Usage:
------
    from scenario.transforms import apply_scenario

    graph2, population2 = apply_scenario(spec, graph, population)
"""

import logging
from dataclasses import replace
from typing import Iterable, List, Optional, Sequence, Tuple, Union

from demand.population import Household, Population, reallocate
from network.model import MultimodalGraph

from .spec import OwnershipRule, ScenarioSpec

logger = logging.getLogger('scenario.transforms')


def apply_transit_removal(graph: MultimodalGraph,
                          agencies: Optional[Iterable[str]] = None) -> MultimodalGraph:
    """
    Remove patterns (all, or those of ``agencies``) and the boarding-capable
    access and transfer edges of stops no longer served. Stops themselves and
    the road, walk and bike layers are kept. Idempotent.
    """
    wanted = None if agencies is None else set(agencies)
    patterns = {pid: p for pid, p in graph.patterns.items()
                if wanted is not None and p.agency not in wanted}
    served = {sid for p in patterns.values() for sid in p.stop_ids}
    access = tuple(e for e in graph.access_edges if e.stop_id in served)
    transfers = tuple(e for e in graph.transfer_edges if e.from_stop in served and e.to_stop in served)
    removed = len(graph.patterns) - len(patterns)
    if removed:
        logger.info(f"Removed {removed} transit patterns, {len(graph.access_edges) - len(access)} access "
                    f"and {len(graph.transfer_edges) - len(transfers)} transfer edges")
    return graph.replace(patterns=patterns, access_edges=access, transfer_edges=transfers)


def buy_up_to_two(vehicles: int) -> int:
    return vehicles + 1 if vehicles < 2 else vehicles


def apply_ownership_rule(households: Sequence[Household],
                         rule: Union[OwnershipRule, str] = OwnershipRule.BUY_UP_TO_TWO) -> List[Household]:
    """Vehicles 0 -> 1, 1 -> 2, k >= 2 unchanged; all other fields kept."""
    if OwnershipRule(rule) == OwnershipRule.NONE:
        return list(households)
    return [replace(h, vehicles_owned=buy_up_to_two(h.vehicles_owned)) for h in households]


def apply_population_rule(population: Population, rule: Union[OwnershipRule, str]) -> Population:
    """Ownership rule plus re-allocation of vehicles to household members."""
    if OwnershipRule(rule) == OwnershipRule.NONE:
        return population
    households = apply_ownership_rule(population.households, rule)
    by_household = {}
    for p in population.persons:
        by_household.setdefault(p.household_id, []).append(p)
    persons = []
    for h in households:
        persons.extend(reallocate(h, by_household.get(h.id, [])))
    before, after = population.total_vehicles, sum(h.vehicles_owned for h in households)
    logger.info(f"Ownership rule {OwnershipRule(rule).value}: fleet {before} -> {after} "
                f"(+{100.0 * (after - before) / before if before else 0.0:.2f}%)")
    return Population(households, sorted(persons, key=lambda p: p.id))


def apply_scenario(spec: ScenarioSpec, graph: MultimodalGraph,
                   population: Population) -> Tuple[MultimodalGraph, Population]:
    if spec.removes_transit:
        agencies = None if spec.transit_removal is True else list(spec.transit_removal)
        graph = apply_transit_removal(graph, agencies)
    population = apply_population_rule(population, spec.ownership_rule)
    return graph, population
