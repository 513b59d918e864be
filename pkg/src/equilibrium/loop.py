"""
Equilibrium Loop
================

Iterates plan -> simulate -> mix until predicted and experienced travel times
agree.

Purpose:
--------
- Iteration 1 draws activity patterns and destinations; later iterations keep
  them and re-choose modes under the updated historical profile
- Mixing with MSA (1/k) or a fixed step; alpha is halved when the gap rises
  for ``oscillation_window`` iterations in a row
- Stops at gap <= target (after ``min_iters``) or ``max_iters``

Usage:
------
    from equilibrium import EquilibriumParams, run_to_convergence

    outcome = run_to_convergence(graph, population, seed=7, eq_params=EquilibriumParams(max_iters=5))
    outcome.state.gap, outcome.iterations_frame()
"""

from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional

import numpy as np
import pandas as pd

from demand.activities import ActivityParams
from demand.choice import ChoiceParams
from demand.plans import PersonDay, generate_day_plans
from demand.population import Population
from demand.trucks import TruckConfig, generate_background_trucks
from network.model import MultimodalGraph
from router.los import build_skims
from router.params import RouterParams
from router.profile import TravelTimeProfile
from simcore.day import DayResult, TravelerDay, run_day
from simcore.params import SimulationParams
from simcore.replan import OutcomeStatus
from utils.logger import ContextLogger, PerformanceLogger
from utils.metrics import MetricsTracker

from .mixing import mix_times, relative_gap
from .params import EquilibriumParams
from .planner import TripPlanner

ITERATION_COLUMNS = ['k', 'gap', 'alpha', 'vehicle_hours', 'mean_speed_kmh', 'person_hours', 'boardings',
                     'cancelled', 'reroutes', 'mode_switches']


@dataclass
class IterationState:
    k: int
    profile: TravelTimeProfile
    experienced: Optional[TravelTimeProfile]
    gap: float
    alpha: float
    kpis: Dict[str, float] = field(default_factory=dict)


@dataclass
class EquilibriumOutcome:
    state: IterationState
    result: DayResult
    days: Dict[int, PersonDay]
    travelers: List[TravelerDay]
    history: List[Dict[str, Any]]
    converged: bool

    def iterations_frame(self) -> pd.DataFrame:
        return pd.DataFrame(self.history, columns=ITERATION_COLUMNS)


def mean_speed_kmh(result: DayResult, graph: MultimodalGraph) -> float:
    """Car distance travelled over car time spent, from the link time records."""
    lengths = np.array([graph.links[l].length for l in result.link_ids], dtype=float)
    distance = float((result.car_time_count.sum(axis=1) * lengths).sum())
    hours = float(result.car_time_sum.sum()) / 3600.0
    if hours <= 0:
        return 0.0
    return distance / 1000.0 / hours


def day_kpis(result: DayResult, graph: MultimodalGraph) -> Dict[str, float]:
    return {
        'vehicle_hours': round(result.vehicle_hours, 6),
        'mean_speed_kmh': round(mean_speed_kmh(result, graph), 6),
        'person_hours': round(result.person_hours, 6),
        'boardings': result.total_boardings,
        'cancelled': sum(1 for o in result.outcomes if o.status == OutcomeStatus.CANCELLED),
        'reroutes': result.reroutes,
        'mode_switches': result.mode_switches,
    }


def run_to_convergence(graph: MultimodalGraph, population: Population, seed: int,
                       activity_params: Optional[ActivityParams] = None,
                       choice_params: Optional[ChoiceParams] = None,
                       router_params: Optional[RouterParams] = None,
                       sim_params: Optional[SimulationParams] = None,
                       eq_params: Optional[EquilibriumParams] = None,
                       truck_config: Optional[TruckConfig] = None,
                       initial_profile: Optional[TravelTimeProfile] = None,
                       workers: int = 1,
                       log: Optional[ContextLogger] = None) -> EquilibriumOutcome:
    """
    Run the outer loop; the trace depends only on the inputs and ``seed``.
    """
    activity_params = activity_params or ActivityParams()
    choice_params = choice_params or ChoiceParams()
    router_params = router_params or RouterParams()
    sim_params = sim_params or SimulationParams()
    eq = eq_params or EquilibriumParams()
    truck_config = truck_config or TruckConfig()
    log = log or ContextLogger('equilibrium.loop')
    perf = PerformanceLogger()
    tracker = MetricsTracker()

    profile = initial_profile or TravelTimeProfile.free_flow(graph)
    planner = TripPlanner(graph, population, choice_params, router_params, seed)
    trucks = generate_background_trucks(
        [n for n in sorted(graph.nodes) if any(l.allows('truck') for l in graph.out_links(n))], truck_config, seed)

    with perf.measure('demand'):
        skims = build_skims(graph, profile, router_params)
        days = generate_day_plans(population, activity_params, choice_params, skims, seed, workers)

    history: List[Dict[str, Any]] = []
    scale = 1.0
    state: Optional[IterationState] = None
    result: Optional[DayResult] = None
    travelers: List[TravelerDay] = []
    converged = False
    for k in range(1, eq.max_iters + 1):
        it_log = log.child(iteration=k)
        with perf.measure(f"iteration_{k}"):
            travelers = planner.plan_days(days, profile, workers)
            truck_plans = planner.plan_trucks(trucks, profile)
            result = run_day(graph, profile, travelers, seed, sim_params, router_params, truck_plans)
            experienced = result.experienced_profile(profile)
            gap = relative_gap(result.trips, experienced, graph, router_params)

        tracker.record('gap', gap, k)
        if tracker.consecutive_increases('gap') == eq.oscillation_window:
            scale *= 0.5
            it_log.warning(f"Gap rose {eq.oscillation_window} iterations in a row; halving alpha "
                           f"(scale now {scale:g})")
        alpha = eq.step_size(k) * scale
        kpis = day_kpis(result, graph)
        tracker.record_batch(kpis, k)
        history.append({'k': k, 'gap': round(gap, 9), 'alpha': round(alpha, 9), **kpis})
        state = IterationState(k, profile, experienced, gap, alpha, kpis)
        it_log.info(f"gap={gap:.5f} alpha={alpha:.4f} veh-h={kpis['vehicle_hours']:.1f} "
                    f"speed={kpis['mean_speed_kmh']:.1f}km/h cancelled={kpis['cancelled']}")

        if gap <= eq.gap_target and k >= eq.min_iters:
            converged = True
            break
        if k < eq.max_iters:
            profile = mix_times(profile, experienced, alpha)

    gap_stats = tracker.get_statistics('gap')
    log.info(f"Gap over {gap_stats['count']} iterations: min {gap_stats['min']:.5f}, "
             f"last {tracker.get_latest('gap'):.5f}, trend {tracker.get_trend('gap')}")
    if not converged:
        log.warning(f"No convergence after {eq.max_iters} iterations (gap {state.gap:.5f} > {eq.gap_target})")
    return EquilibriumOutcome(state, result, days, travelers, history, converged)
