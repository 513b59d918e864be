"""
Impact Report
=============

Compares two completed runs and writes the report tree.

Purpose:
--------
- Load the persisted artifacts of a scenario run (RunArtifacts)
- Refuse to compare runs built from different synthetic populations
- Assemble congestion deltas, mode shares, activity tables, equity shares,
  the mobility-of-care delta and the economic impact into one ImpactReport
- Write ``report.json``, ``tables/*.csv`` and plot-ready ``plotdata/*.csv``

Usage:
------
    from analytics.report import RunArtifacts, build_report, write_report

    base = RunArtifacts.load(out / 'baseline', out / 'graph.baseline.json')
    scen = RunArtifacts.load(out / 'transit_removal', out / 'graph.transit_removal.json')
    report = build_report(base, scen, masks={'city': [1, 2, 3]})
    write_report(report, out / 'compare', cfg_hash)
"""

import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Mapping, Optional

import pandas as pd

from demand.population import Population
from network.model import MultimodalGraph, load_graph
from utils.errors import ArtifactMismatchError
from utils.io import read_csv, read_json, write_csv, write_json

from .assumptions import EconomicAssumptions
from .congestion import (congestion_deltas, congestion_kpis, mode_share, speed_profile,
                         vehicles_in_network_frame)
from .economics import EconomicImpact, economic_impact, spending_reductions
from .equity import EquityReport, equity_shares
from .tables import (CancellationTable, CareDelta, cancellation_rates, cancellation_table,
                     care_delta_from_counts, group_changes, performed_counts)

logger = logging.getLogger('analytics.report')

REGION = 'region'


@dataclass
class RunArtifacts:
    """Everything ``cmd_run`` persisted for one scenario."""
    name: str
    outcomes: pd.DataFrame
    trips: pd.DataFrame
    link_times: pd.DataFrame
    summary: Dict[str, Any]
    population: Population
    graph: MultimodalGraph

    @property
    def population_hash(self) -> Optional[str]:
        return self.summary.get('population_hash')

    @property
    def outcome_rows(self) -> List[Dict[str, Any]]:
        return self.outcomes.to_dict('records')

    @classmethod
    def load(cls, run_dir: Path, graph_path: Path) -> 'RunArtifacts':
        run_dir = Path(run_dir)
        summary = read_json(run_dir / 'summary.json')
        population = Population.from_frames(read_csv(run_dir / 'households.csv'),
                                            read_csv(run_dir / 'population.csv'))
        trips = read_csv(run_dir / 'trips.csv', keep_default_na=False, na_values=[''])
        trips['mode'] = trips['mode'].fillna('')
        trips['status'] = trips['status'].fillna('')
        return cls(
            name=summary.get('scenario', run_dir.name),
            outcomes=read_csv(run_dir / 'outcomes.csv', keep_default_na=False, na_values=['']),
            trips=trips,
            link_times=read_csv(run_dir / 'linktimes.csv'),
            summary=summary,
            population=population,
            graph=load_graph(graph_path),
        )


@dataclass
class ImpactReport:
    baseline: str
    scenario: str
    congestion: Dict[str, Dict[str, Optional[float]]]
    mode_share: Dict[str, Dict[str, float]]
    tables: Dict[str, CancellationTable]
    group_changes: Dict[str, Dict[str, Optional[float]]]
    cancellation_rates: Dict[str, Dict[str, Optional[float]]]
    equity: EquityReport
    care: CareDelta
    economics: EconomicImpact
    ownership: Dict[str, Dict[str, int]]
    boardings: Dict[str, Dict[str, int]]
    scheduled_trips: Dict[str, Dict[str, int]]
    plotdata: Dict[str, pd.DataFrame] = field(default_factory=dict, repr=False)

    def to_dict(self) -> Dict[str, Any]:
        return {
            'baseline': self.baseline,
            'scenario': self.scenario,
            'congestion': self.congestion,
            'mode_share': self.mode_share,
            'activities': {name: t.to_dict() for name, t in self.tables.items()},
            'group_changes': self.group_changes,
            'cancellation_rates': self.cancellation_rates,
            'equity': self.equity.to_dict(),
            'mobility_of_care': self.care.to_dict(),
            'economics': self.economics.to_dict(),
            'vehicle_ownership': self.ownership,
            'boardings_by_mode': self.boardings,
            'scheduled_trips_by_mode': self.scheduled_trips,
        }


def _mode_table(entries: Mapping[str, int]) -> Dict[str, int]:
    return {k: int(v) for k, v in sorted(entries.items())}


def build_report(baseline: RunArtifacts, scenario: RunArtifacts,
                 masks: Optional[Mapping[str, List[int]]] = None,
                 assumptions: Optional[EconomicAssumptions] = None) -> ImpactReport:
    """
    Compare ``scenario`` against ``baseline``.

    Raises:
        ArtifactMismatchError: the runs were built from different populations
    """
    if baseline.population_hash != scenario.population_hash:
        raise ArtifactMismatchError(
            f"Runs '{baseline.name}' and '{scenario.name}' come from different populations "
            f"({baseline.population_hash} != {scenario.population_hash})")
    assumptions = assumptions or EconomicAssumptions()
    masks = dict(sorted((masks or {}).items()))
    selections: Dict[str, Optional[List[int]]] = {REGION: None, **masks}

    base_rows, scen_rows = baseline.outcome_rows, scenario.outcome_rows
    tables = {name: cancellation_table(base_rows, scen_rows, zones, name) for name, zones in selections.items()}

    congestion = {}
    for name, zones in selections.items():
        b = congestion_kpis(baseline.link_times, baseline.trips, baseline.graph, zones)
        s = congestion_kpis(scenario.link_times, scenario.trips, scenario.graph, zones)
        congestion[name] = congestion_deltas(b, s)

    cancelled = [r for r in scen_rows if r['status'] == 'cancelled']
    equity = equity_shares(cancelled, scenario.population)

    base_counts, scen_counts = performed_counts(base_rows), performed_counts(scen_rows)
    reductions = spending_reductions(base_counts, scen_counts, assumptions)
    economics = economic_impact(
        vehicle_hours_delta=scenario.summary['vehicle_hours'] - baseline.summary['vehicle_hours'],
        transit_person_hours=baseline.summary['transit_person_hours'] - scenario.summary['transit_person_hours'],
        added_cars=scenario.population.total_vehicles - baseline.population.total_vehicles,
        reductions=reductions, assumptions=assumptions,
        households=float(len(baseline.population.households)))

    speeds = speed_profile(baseline.link_times, baseline.graph).rename(columns={'speed_kmh': 'baseline_kmh'})
    speeds['scenario_kmh'] = speed_profile(scenario.link_times, scenario.graph)['speed_kmh']
    plotdata = {
        'vehicles_in_network': vehicles_in_network_frame(baseline.summary['vehicles_in_network'],
                                                         scenario.summary['vehicles_in_network']),
        'speed_profile': speeds,
    }
    ownership = {baseline.name: baseline.population.ownership_histogram(),
                 scenario.name: scenario.population.ownership_histogram()}
    plotdata['vehicle_ownership'] = pd.DataFrame(
        [(k, ownership[baseline.name][k], ownership[scenario.name][k]) for k in ownership[baseline.name]],
        columns=['vehicles', 'baseline', 'scenario'])
    boardings = {baseline.name: _mode_table(baseline.summary.get('boardings_by_mode', {})),
                 scenario.name: _mode_table(scenario.summary.get('boardings_by_mode', {}))}
    keys = sorted(set(boardings[baseline.name]) | set(boardings[scenario.name]))
    plotdata['boardings_by_mode'] = pd.DataFrame(
        [(k, boardings[baseline.name].get(k, 0), boardings[scenario.name].get(k, 0)) for k in keys],
        columns=['agency_mode', 'baseline', 'scenario'])

    report = ImpactReport(
        baseline=baseline.name,
        scenario=scenario.name,
        congestion=congestion,
        mode_share={baseline.name: mode_share(baseline.trips), scenario.name: mode_share(scenario.trips)},
        tables=tables,
        group_changes={name: group_changes(t) for name, t in tables.items()},
        cancellation_rates={baseline.name: cancellation_rates(base_rows),
                            scenario.name: cancellation_rates(scen_rows)},
        equity=equity,
        care=care_delta_from_counts(base_counts, scen_counts),
        economics=economics,
        ownership=ownership,
        boardings=boardings,
        scheduled_trips={baseline.name: _mode_table(baseline.summary.get('scheduled_trips', {})),
                         scenario.name: _mode_table(scenario.summary.get('scheduled_trips', {}))},
        plotdata=plotdata,
    )
    region = tables[REGION].total
    logger.info(f"Compared {baseline.name} vs {scenario.name}: activities {region.baseline:.0f} -> "
                f"{region.scenario:.0f}, total impact ${economics.grand_total / 1e9:.3f}B")
    return report


def _equity_frame(shares: Mapping[str, Mapping[str, Optional[float]]], label: str) -> pd.DataFrame:
    return pd.DataFrame([(g, v.get('overall'), v.get('non_work')) for g, v in shares.items()],
                        columns=[label, 'overall_pct', 'non_work_pct'])


def write_report(report: ImpactReport, out_dir: Path, cfg_hash: str) -> Path:
    """Write the report tree under ``out_dir``; returns the path of report.json."""
    out_dir = Path(out_dir)
    for name, table in report.tables.items():
        write_csv(table.to_frame(), out_dir / 'tables' / f"activities_{name}.csv", cfg_hash)
    write_csv(report.economics.to_frame(), out_dir / 'tables' / 'economics.csv', cfg_hash)
    write_csv(_equity_frame(report.equity.gender, 'gender'), out_dir / 'tables' / 'equity_gender.csv', cfg_hash)
    write_csv(_equity_frame(report.equity.quintile, 'income_quintile'),
              out_dir / 'tables' / 'equity_quintile.csv', cfg_hash)
    for dim, counts in (('household_zone', report.equity.household_zone),
                        ('activity_zone', report.equity.activity_zone)):
        frame = pd.DataFrame(sorted(counts.items()), columns=['zone', 'cancellations'])
        write_csv(frame, out_dir / 'tables' / f"equity_{dim}.csv", cfg_hash)
    for name, frame in report.plotdata.items():
        write_csv(frame, out_dir / 'plotdata' / f"{name}.csv", cfg_hash)
    return write_json(report.to_dict(), out_dir / 'report.json', cfg_hash)
