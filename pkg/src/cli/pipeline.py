"""
Pipeline Stages
===============

Stage drivers behind the CLI verbs. Every stage reads and writes artifacts
under ``paths.output_dir`` so long runs can resume:

    graph.<scenario>.json                    build
    synth/households.csv, synth/population.csv  synthesize
    <scenario>/outcomes.csv ... summary.json   run
    compare/<a>_vs_<b>/report.json ...       compare

Purpose:
--------
- Fail fast on malformed inputs (GTFS, CFL bound)
- Refuse to run on artifacts produced by a different configuration
- Keep outputs a pure function of (config, seed), whatever ``workers`` is

Usage:
------
    from cli.pipeline import Pipeline

    pipeline = Pipeline(cfg)
    pipeline.build()
    pipeline.synthesize()
    pipeline.run('baseline')
    pipeline.run('transit_removal')
    pipeline.compare('baseline', 'transit_removal')
"""

from pathlib import Path
from typing import Any, Dict, List, Optional

import pandas as pd

from analytics.congestion import mode_share
from analytics.report import RunArtifacts, build_report, write_report
from analytics.tables import cancellation_rates
from demand.plans import activities_frame
from demand.population import Population, synthesize_population
from equilibrium.loop import EquilibriumOutcome, run_to_convergence
from equilibrium.params import EquilibriumParams
from network.builder import GraphBuilder
from network.gtfs import GtfsParser
from network.model import MultimodalGraph, load_graph, save_graph
from router.dispatch import TripRouter
from router.plan import Mode, TripPlan
from router.profile import TravelTimeProfile
from scenario.transforms import apply_population_rule, apply_transit_removal
from simcore.traffic import check_cfl
from utils.errors import StaleArtifactError
from utils.io import read_config_hash, read_csv, write_csv, write_json, write_jsonl
from utils.logger import ContextLogger, PerformanceLogger

from .config import RunConfig, Stage

SYNTH_DIR = 'synth'
COMPARE_DIR = 'compare'


def _mode_key(key) -> str:
    agency, mode = key
    return f"{agency}/{mode}"


class Pipeline:
    """Runs the stages of one configuration."""

    def __init__(self, cfg: RunConfig, workers: Optional[int] = None):
        self.cfg = cfg
        self.workers = workers or cfg.workers
        self.out = Path(cfg.paths.output_dir)
        self.log = ContextLogger('cli.Pipeline')
        self.perf = PerformanceLogger()

    # --- artifact locations -------------------------------------------

    def graph_path(self, scenario: str) -> Path:
        return self.out / f"graph.{scenario}.json"

    def run_dir(self, scenario: str) -> Path:
        return self.out / scenario

    def compare_dir(self, a: str, b: str) -> Path:
        return self.out / COMPARE_DIR / f"{a}_vs_{b}"

    def _require_fresh(self, path: Path, stage: Stage, hint: str) -> None:
        if not path.exists():
            raise StaleArtifactError(f"Missing artifact {path}; run '{hint}' first")
        expected = self.cfg.stage_hash(stage)
        found = read_config_hash(path)
        if found != expected:
            raise StaleArtifactError(
                f"{path} was produced from a different configuration ({found} != {expected}); "
                f"re-run '{hint}'")

    # --- build -----------------------------------------------------------

    def build_base_graph(self) -> MultimodalGraph:
        params = self.cfg.network
        patterns, stops = [], []
        if self.cfg.paths.gtfs_dir is not None:
            feed = GtfsParser(params).parse(self.cfg.paths.gtfs_dir, params.service_date)
            patterns, stops = feed.patterns, feed.stops
            if feed.warning_count:
                self.log.warning(f"{feed.warning_count} GTFS trips rejected")
        graph = GraphBuilder(params).build(self.cfg.paths.network_dir, patterns, stops)
        check_cfl(graph, self.cfg.simulation.dt)
        return graph

    def build(self) -> Dict[str, Path]:
        """Write one graph artifact per scenario."""
        log = self.log.child(stage='build')
        cfg_hash = self.cfg.stage_hash(Stage.BUILD)
        with self.perf.measure('build'):
            base = self.build_base_graph()
            written = {}
            for spec in self.cfg.scenarios:
                graph = base
                if spec.removes_transit:
                    agencies = None if spec.transit_removal is True else list(spec.transit_removal)
                    graph = apply_transit_removal(base, agencies)
                written[spec.name] = save_graph(graph, self.graph_path(spec.name), cfg_hash)
                log.info(f"{spec.name}: {len(graph.patterns)} patterns -> {written[spec.name]}")
        return written

    # --- synthesize ------------------------------------------------------

    def synthesize(self) -> Population:
        log = self.log.child(stage='synthesize')
        graph_file = self.graph_path('baseline')
        self._require_fresh(graph_file, Stage.BUILD, 'build')
        pop_cfg = self.cfg.population
        if not pop_cfg.zone_weights:
            zones = load_graph(graph_file).zone_ids
            pop_cfg = pop_cfg.model_copy(update={'zone_weights': {z: 1.0 for z in zones}})
            log.info(f"No zone weights configured; using {len(zones)} zones uniformly")
        with self.perf.measure('synthesize'):
            population = synthesize_population(pop_cfg, self.cfg.seed)
        cfg_hash = self.cfg.stage_hash(Stage.SYNTHESIZE)
        write_csv(population.households_frame(), self.out / SYNTH_DIR / 'households.csv', cfg_hash)
        write_csv(population.persons_frame(), self.out / SYNTH_DIR / 'population.csv', cfg_hash)
        log.info(f"{len(population.households)} households, {len(population.persons)} persons")
        return population

    def load_population(self) -> Population:
        households = self.out / SYNTH_DIR / 'households.csv'
        persons = self.out / SYNTH_DIR / 'population.csv'
        for path in (households, persons):
            self._require_fresh(path, Stage.SYNTHESIZE, 'synthesize')
        return Population.from_frames(read_csv(households), read_csv(persons))

    # --- run -------------------------------------------------------------

    def run(self, scenario: str, max_iters: Optional[int] = None) -> EquilibriumOutcome:
        """Run the outer loop for one scenario and write its artifacts."""
        spec = self.cfg.scenario(scenario)
        log = self.log.child(stage='run', scenario=scenario)
        graph_file = self.graph_path(scenario)
        self._require_fresh(graph_file, Stage.BUILD, 'build')
        graph = load_graph(graph_file)
        population = apply_population_rule(self.load_population(), spec.ownership_rule)

        eq = self.cfg.equilibrium
        if max_iters is not None:
            eq = EquilibriumParams.model_validate({**eq.model_dump(), 'max_iters': max_iters,
                                                   'min_iters': min(eq.min_iters, max_iters)})
        with self.perf.measure(f"run_{scenario}"):
            outcome = run_to_convergence(
                graph, population, self.cfg.seed,
                activity_params=self.cfg.activities,
                choice_params=self.cfg.choice_for(spec),
                router_params=self.cfg.router,
                sim_params=self.cfg.simulation_for(spec),
                eq_params=eq,
                truck_config=self.cfg.trucks,
                workers=self.workers,
                log=log)
        self.write_run(scenario, graph, population, outcome)
        log.info(f"Finished after {outcome.state.k} iterations (gap {outcome.state.gap:.5f}, "
                 f"converged={outcome.converged})")
        return outcome

    def write_run(self, scenario: str, graph: MultimodalGraph, population: Population,
                  outcome: EquilibriumOutcome) -> Path:
        cfg_hash = self.cfg.config_hash
        out = self.run_dir(scenario)
        result = outcome.result
        outcomes = result.outcomes_frame()
        trips = result.trips_frame()
        write_csv(outcomes, out / 'outcomes.csv', cfg_hash)
        write_csv(result.link_times_frame(), out / 'linktimes.csv', cfg_hash)
        write_csv(trips, out / 'trips.csv', cfg_hash)
        write_csv(outcome.iterations_frame(), out / 'iterations.csv', cfg_hash)
        write_csv(result.boardings_frame(), out / 'boardings.csv', cfg_hash)
        write_csv(population.households_frame(), out / 'households.csv', cfg_hash)
        write_csv(population.persons_frame(), out / 'population.csv', cfg_hash)
        write_csv(activities_frame(outcome.days), out / 'activities.csv', cfg_hash)
        if result.trajectories:
            write_jsonl(result.trajectories, out / 'trajectories.jsonl', cfg_hash)

        state = outcome.state
        summary: Dict[str, Any] = {
            'scenario': scenario,
            'seed': self.cfg.seed,
            'population_hash': self.cfg.stage_hash(Stage.SYNTHESIZE),
            'iterations': state.k,
            'converged': outcome.converged,
            'final_gap': state.gap,
            **state.kpis,
            'bus_hours': round(result.bus_hours, 6),
            'transit_person_hours': round(result.transit_person_hours, 6),
            'boardings_by_mode': {_mode_key(k): v for k, v in sorted(result.boardings_by_mode.items())},
            'scheduled_trips': {_mode_key(k): v for k, v in sorted(graph.scheduled_trips().items())},
            'vehicles_in_network': [round(float(v), 6) for v in result.vehicles_in_network],
            'denied_boardings': result.denied_boardings,
            'gave_up': result.gave_up,
            'truck_trips': result.truck_trips,
            'mode_share': mode_share(trips),
            'cancellation_rates': cancellation_rates(outcomes.to_dict('records')),
            'fleet': population.total_vehicles,
            'vehicle_ownership': population.ownership_histogram(),
        }
        return write_json(summary, out / 'summary.json', cfg_hash)

    # --- compare ---------------------------------------------------------

    def compare(self, baseline: str, scenario: str) -> Path:
        log = self.log.child(stage='compare')
        runs = []
        for name in (baseline, scenario):
            self.cfg.scenario(name)
            if not (self.run_dir(name) / 'summary.json').exists():
                raise StaleArtifactError(f"No completed run for '{name}'; run it first")
            runs.append(RunArtifacts.load(self.run_dir(name), self.graph_path(name)))
        with self.perf.measure('compare'):
            report = build_report(runs[0], runs[1], self.cfg.masks_for(baseline, scenario), self.cfg.economics)
        path = write_report(report, self.compare_dir(baseline, scenario), self.cfg.config_hash)
        log.info(f"Report written to {path}")
        return path

    # --- route -----------------------------------------------------------

    def plans(self, scenario: str, origin: int, destination: int, departure: float,
              modes: Optional[List[str]] = None) -> List[TripPlan]:
        """Free-flow plans between two nodes, one per mode that has a path."""
        graph_file = self.graph_path(scenario)
        self._require_fresh(graph_file, Stage.BUILD, 'build')
        graph = load_graph(graph_file)
        router = TripRouter(graph, TravelTimeProfile.free_flow(graph), self.cfg.router)
        found = []
        for mode in modes or [m.value for m in Mode if m != Mode.TRUCK]:
            plan = router.route(mode, origin, destination, departure)
            if plan is not None:
                found.append(plan)
        return found

    def route(self, scenario: str, origin: int, destination: int, departure: float,
              modes: Optional[List[str]] = None) -> pd.DataFrame:
        """``plans`` as a table, one row per mode."""
        rows = [{'mode': plan.mode.value, 'departure': plan.departure, 'arrival': plan.arrival,
                 'total_time': plan.predicted_total, 'in_vehicle': plan.in_vehicle_time,
                 'wait': plan.wait_time, 'walk': plan.walk_time, 'distance': plan.distance,
                 'boardings': plan.boardings, 'generalized_cost': plan.generalized_cost}
                for plan in self.plans(scenario, origin, destination, departure, modes)]
        return pd.DataFrame(rows, columns=['mode', 'departure', 'arrival', 'total_time', 'in_vehicle', 'wait',
                                           'walk', 'distance', 'boardings', 'generalized_cost'])
