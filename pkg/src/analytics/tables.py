"""
Activity tables
===============

Counts of performed activities by type in two scenarios, with percent
changes, plus cancellation rates and the mobility-of-care aggregate.

A performed activity is any outcome other than ``cancelled``. Masks select
activities by location zone.

Usage:
------
    from analytics.tables import cancellation_table

    table = cancellation_table(baseline_outcomes, removal_outcomes, mask=city_zones, name='city')
    table.total.pct_change
    table.to_frame()
"""

from dataclasses import dataclass
from typing import Dict, Iterable, List, Mapping, Optional

import pandas as pd

from demand.activities import CARE_TYPES, WORK_SCHOOL_TYPES, ActivityType

TOTAL = 'total'


def percent_change(baseline: float, scenario: float) -> Optional[float]:
    """(scenario - baseline) / baseline * 100, or None for a zero baseline."""
    if baseline == 0:
        return None
    return (scenario - baseline) / baseline * 100.0


@dataclass(frozen=True)
class TableRow:
    activity_type: str
    baseline: float
    scenario: float

    @property
    def pct_change(self) -> Optional[float]:
        return percent_change(self.baseline, self.scenario)


@dataclass(frozen=True)
class CancellationTable:
    name: str
    rows: List[TableRow]
    total: TableRow

    def row(self, activity_type: str) -> TableRow:
        for r in self.rows:
            if r.activity_type == activity_type:
                return r
        raise KeyError(activity_type)

    def to_frame(self) -> pd.DataFrame:
        data = [(r.activity_type, r.baseline, r.scenario,
                 None if r.pct_change is None else round(r.pct_change, 4)) for r in self.rows + [self.total]]
        return pd.DataFrame(data, columns=['activity_type', 'baseline', 'scenario', 'pct_change'])

    def to_dict(self) -> Dict:
        return {'name': self.name,
                'rows': {r.activity_type: {'baseline': r.baseline, 'scenario': r.scenario, 'pct_change': r.pct_change}
                         for r in self.rows + [self.total]}}


def _status(o) -> str:
    status = o['status'] if isinstance(o, Mapping) else o.status
    return getattr(status, 'value', status)


def _field(o, name):
    return o[name] if isinstance(o, Mapping) else getattr(o, name)


def performed_counts(outcomes: Iterable, mask: Optional[Iterable[int]] = None) -> Dict[str, int]:
    """Performed activities by type; ``outcomes`` are ActivityOutcome objects or row mappings."""
    zones = set(mask) if mask is not None else None
    counts = {t.value: 0 for t in ActivityType}
    for o in outcomes:
        if _status(o) == 'cancelled':
            continue
        if zones is not None and _field(o, 'location_zone') not in zones:
            continue
        kind = _field(o, 'activity_type') if not isinstance(o, Mapping) else o['type']
        counts[kind] = counts.get(kind, 0) + 1
    return counts


def table_from_counts(baseline: Mapping[str, float], scenario: Mapping[str, float],
                      name: str = 'region') -> CancellationTable:
    known = [t.value for t in ActivityType]
    types = known + sorted((set(baseline) | set(scenario)) - set(known))
    rows = [TableRow(t, float(baseline.get(t, 0)), float(scenario.get(t, 0))) for t in types]
    total = TableRow(TOTAL, sum(r.baseline for r in rows), sum(r.scenario for r in rows))
    return CancellationTable(name, rows, total)


def cancellation_table(baseline: Iterable, scenario: Iterable, mask: Optional[Iterable[int]] = None,
                       name: str = 'region') -> CancellationTable:
    mask = list(mask) if mask is not None else None
    return table_from_counts(performed_counts(baseline, mask), performed_counts(scenario, mask), name)


def group_changes(table: CancellationTable) -> Dict[str, Optional[float]]:
    """Percent change for work/school, non-work and all activities."""
    work = {t.value for t in WORK_SCHOOL_TYPES}
    sums = {'work_school': [0.0, 0.0], 'non_work': [0.0, 0.0]}
    for r in table.rows:
        key = 'work_school' if r.activity_type in work else 'non_work'
        sums[key][0] += r.baseline
        sums[key][1] += r.scenario
    out = {k: percent_change(b, s) for k, (b, s) in sums.items()}
    out['overall'] = table.total.pct_change
    return out


def cancellation_rates(outcomes: Iterable) -> Dict[str, Optional[float]]:
    """Share of planned activities cancelled within one run, in percent."""
    work = {t.value for t in WORK_SCHOOL_TYPES}
    planned = {'work_school': 0, 'non_work': 0}
    cancelled = {'work_school': 0, 'non_work': 0}
    for o in outcomes:
        kind = o['type'] if isinstance(o, Mapping) else o.activity_type
        key = 'work_school' if kind in work else 'non_work'
        planned[key] += 1
        cancelled[key] += _status(o) == 'cancelled'
    rates = {k: (cancelled[k] / planned[k] * 100.0 if planned[k] else None) for k in planned}
    total = sum(planned.values())
    rates['overall'] = sum(cancelled.values()) / total * 100.0 if total else None
    return rates


@dataclass(frozen=True)
class CareDelta:
    baseline: float
    scenario: float

    @property
    def lost(self) -> float:
        return self.baseline - self.scenario

    @property
    def pct_drop(self) -> Optional[float]:
        change = percent_change(self.baseline, self.scenario)
        return None if change is None else -change

    def to_dict(self) -> Dict:
        return {'baseline': self.baseline, 'scenario': self.scenario, 'lost': self.lost, 'pct_drop': self.pct_drop}


def care_delta_from_counts(baseline: Mapping[str, float], scenario: Mapping[str, float]) -> CareDelta:
    care = [t.value for t in CARE_TYPES]
    return CareDelta(float(sum(baseline.get(t, 0) for t in care)), float(sum(scenario.get(t, 0) for t in care)))


def care_delta(baseline: Iterable, scenario: Iterable) -> CareDelta:
    """Aggregate change over errands, healthcare, pickup-dropoff, school and shop-major."""
    return care_delta_from_counts(performed_counts(baseline), performed_counts(scenario))
