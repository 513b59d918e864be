"""
Who cancels: shares of cancellations by gender and income quintile, and
counts by household zone and by activity zone.
"""

from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Mapping, Optional, Tuple

from demand.activities import WORK_SCHOOL_TYPES
from demand.population import Population

WORK_SCHOOL = frozenset(t.value for t in WORK_SCHOOL_TYPES)


@dataclass
class EquityReport:
    total: int
    non_work_total: int
    gender: Dict[str, Dict[str, Optional[float]]] = field(default_factory=dict)
    quintile: Dict[str, Dict[str, Optional[float]]] = field(default_factory=dict)
    household_zone: Dict[int, int] = field(default_factory=dict)
    activity_zone: Dict[int, int] = field(default_factory=dict)

    def lowest_two_quintiles(self, scope: str = 'overall') -> Optional[float]:
        a, b = self.quintile.get('1', {}).get(scope), self.quintile.get('2', {}).get(scope)
        return None if a is None or b is None else a + b

    def top_zones(self, by: str = 'household', n: int = 10) -> List[Tuple[int, int]]:
        counts = self.household_zone if by == 'household' else self.activity_zone
        return sorted(counts.items(), key=lambda kv: (-kv[1], kv[0]))[:n]

    def to_dict(self) -> Dict:
        return {'total': self.total, 'non_work_total': self.non_work_total, 'gender': self.gender,
                'quintile': self.quintile, 'lowest_40pct': {s: self.lowest_two_quintiles(s)
                                                            for s in ('overall', 'non_work')},
                'top_household_zones': self.top_zones('household'),
                'top_activity_zones': self.top_zones('activity')}


def _shares(counts: Mapping[str, int], total: int, groups: Iterable[str]) -> Dict[str, Optional[float]]:
    return {g: (counts.get(g, 0) / total * 100.0 if total else None) for g in groups}


def equity_shares(cancellations: Iterable, population: Population) -> EquityReport:
    """
    ``cancellations`` are cancelled ActivityOutcome objects (or rows with
    person_id, type and location_zone); every one must join to a person.
    """
    by_gender = {'overall': {}, 'non_work': {}}
    by_quintile = {'overall': {}, 'non_work': {}}
    home_zone: Dict[int, int] = {}
    act_zone: Dict[int, int] = {}
    total = non_work = 0
    for c in cancellations:
        get = c.get if isinstance(c, Mapping) else (lambda k, c=c: getattr(c, k))
        person = population.person(int(get('person_id')))
        household = population.household_of(person)
        kind = get('type') if isinstance(c, Mapping) else c.activity_type
        scopes = ['overall'] if kind in WORK_SCHOOL else ['overall', 'non_work']
        total += 1
        non_work += kind not in WORK_SCHOOL
        for s in scopes:
            g = person.gender.value
            q = str(household.income_quintile)
            by_gender[s][g] = by_gender[s].get(g, 0) + 1
            by_quintile[s][q] = by_quintile[s].get(q, 0) + 1
        home_zone[household.home_zone] = home_zone.get(household.home_zone, 0) + 1
        zone = get('location_zone')
        if zone is not None:
            act_zone[int(zone)] = act_zone.get(int(zone), 0) + 1

    genders = ('female', 'male')
    quintiles = tuple(str(q) for q in range(1, 6))
    report = EquityReport(total, non_work, household_zone=dict(sorted(home_zone.items())),
                          activity_zone=dict(sorted(act_zone.items())))
    for g in genders:
        report.gender[g] = {'overall': _shares(by_gender['overall'], total, [g])[g],
                            'non_work': _shares(by_gender['non_work'], non_work, [g])[g]}
    for q in quintiles:
        report.quintile[q] = {'overall': _shares(by_quintile['overall'], total, [q])[q],
                              'non_work': _shares(by_quintile['non_work'], non_work, [q])[q]}
    return report
