"""
Test Equilibrium Module
=======================

Information mixing, the relative gap and the outer loop.

Usage:
    python -m pytest tests/test_equilibrium.py
"""

import numpy as np
import pytest
from pydantic import ValidationError

from conftest import corridor_graph, grid_graph
from demand.choice import ChoiceParams
from demand.population import PopulationConfig, synthesize_population
from equilibrium import (
    EquilibriumParams, available_modes, gap_from_costs, mix_times, relative_gap, run_to_convergence,
)
from equilibrium.loop import ITERATION_COLUMNS
from network.builder import GraphBuilder
from network.gtfs import GtfsParser
from network.params import NetworkParams
from network.toycity import ToyCityGenerator
from router.plan import Mode
from router.profile import N_BINS, TravelTimeProfile
from simcore.day import TripRecord, TripStatus
from utils.errors import ConfigError
from utils.metrics import MetricsTracker

FFS = 13.9


def link_between(graph, a, b):
    return next(l.id for l in graph.links.values() if l.from_node == a and l.to_node == b)


def drive_record(graph, nodes, departure=8 * 3600.0):
    links = [link_between(graph, a, b) for a, b in zip(nodes, nodes[1:])]
    return TripRecord(1, 0, None, 'work', Mode.DRIVE, departure, nodes[0], nodes[-1], mode=Mode.DRIVE,
                      status=TripStatus.ARRIVED, arrival=departure + 100.0, links=links)


@pytest.fixture
def tiny_population():
    return synthesize_population(PopulationConfig(households=20, zone_weights={z: 1.0 for z in (1, 2, 3, 4)}),
                                 seed=5)


class TestMixTimes:
    """Test blending historical and experienced link times."""

    def test_half_step(self):
        graph = corridor_graph(2, 500.0)
        base = TravelTimeProfile.free_flow(graph)
        slow = base.with_times(base.times * 3.0)
        mixed = mix_times(base, slow, 0.5)
        assert np.allclose(mixed.times, base.times * 2.0)

    def test_full_step_takes_experience(self):
        graph = corridor_graph(2, 500.0)
        base = TravelTimeProfile.free_flow(graph)
        slow = base.with_times(base.times * 1.7)
        assert mix_times(base, slow, 1.0) == slow

    @pytest.mark.parametrize('alpha', [0.0, -0.1, 1.5])
    def test_alpha_range(self, alpha):
        base = TravelTimeProfile.free_flow(corridor_graph())
        with pytest.raises(ConfigError):
            mix_times(base, base, alpha)

    def test_link_mismatch(self):
        with pytest.raises(ConfigError):
            mix_times(TravelTimeProfile.free_flow(corridor_graph(2)), TravelTimeProfile.free_flow(corridor_graph(3)),
                      0.5)

    def test_never_below_free_flow(self):
        graph = corridor_graph(2, 500.0)
        base = TravelTimeProfile.free_flow(graph)
        fast = TravelTimeProfile(base.link_ids, base.times * 0.5, base.free_flow_times, base.class_free_flow)
        assert np.all(mix_times(base, fast, 0.9).times >= base.free_flow_times[:, None] - 1e-9)
        assert fast.times.shape == (2, N_BINS)


class TestRelativeGap:
    """Test the gap between experienced and best routes."""

    def test_from_costs(self):
        assert gap_from_costs([12.0, 10.0], [10.0, 10.0]) == pytest.approx(0.1)
        assert gap_from_costs([5.0], [6.0]) == 0.0
        assert gap_from_costs([], []) == 0.0

    def test_best_route_has_no_gap(self):
        graph = grid_graph(4)
        profile = TravelTimeProfile.free_flow(graph)
        assert relative_gap([drive_record(graph, [1, 2, 3])], profile, graph) == pytest.approx(0.0, abs=1e-12)

    def test_detour(self):
        graph = grid_graph(4)
        profile = TravelTimeProfile.free_flow(graph)
        gap = relative_gap([drive_record(graph, [1, 5, 6, 2])], profile, graph)
        assert gap == pytest.approx((1200.0 - 400.0) / 400.0, rel=1e-9)

    def test_only_arrived_drive_trips(self):
        graph = grid_graph(4)
        profile = TravelTimeProfile.free_flow(graph)
        walked = drive_record(graph, [1, 5, 6, 2])
        walked.mode = Mode.WALK
        unfinished = drive_record(graph, [1, 5, 6, 2])
        unfinished.arrival = None
        assert relative_gap([walked, unfinished], profile, graph) == 0.0


class TestEquilibriumParams:
    """Test the mixing step schedule."""

    def test_msa(self):
        params = EquilibriumParams()
        assert [params.step_size(k) for k in (1, 2, 4)] == [1.0, 0.5, 0.25]

    def test_fixed(self):
        assert EquilibriumParams(alpha_schedule='fixed', alpha=0.3).step_size(5) == 0.3

    def test_iteration_bounds(self):
        with pytest.raises(ValidationError):
            EquilibriumParams(max_iters=2, min_iters=3)


class TestPlanner:
    """Test mode availability."""

    def test_carless_modes(self):
        assert available_modes(False) == (Mode.WALK_TO_TRANSIT, Mode.WALK, Mode.BIKE)
        assert Mode.DRIVE in available_modes(True)


class TestRunToConvergence:
    """Test the outer loop on a small uncongested grid."""

    def test_converges(self, grid, tiny_population):
        outcome = run_to_convergence(grid, tiny_population, seed=3,
                                     eq_params=EquilibriumParams(max_iters=3, min_iters=1, gap_target=0.2))
        assert outcome.converged
        assert outcome.state.gap <= 0.2
        frame = outcome.iterations_frame()
        assert list(frame.columns) == ITERATION_COLUMNS
        assert frame.k.tolist() == list(range(1, len(frame) + 1))

    def test_msa_steps(self, grid, tiny_population):
        outcome = run_to_convergence(grid, tiny_population, seed=3,
                                     eq_params=EquilibriumParams(max_iters=2, min_iters=2, gap_target=0.2))
        assert [h['alpha'] for h in outcome.history] == [1.0, 0.5]

    def test_one_outcome_per_activity(self, grid, tiny_population):
        outcome = run_to_convergence(grid, tiny_population, seed=3, eq_params=EquilibriumParams(max_iters=1,
                                                                                                min_iters=1))
        planned = sorted(a.id for day in outcome.days.values() for a in day.activities)
        assert sorted(o.activity_id for o in outcome.result.outcomes) == planned

    def test_deterministic_across_workers(self, grid, tiny_population):
        params = EquilibriumParams(max_iters=2, min_iters=2)
        one = run_to_convergence(grid, tiny_population, seed=3, eq_params=params, workers=1)
        four = run_to_convergence(grid, tiny_population, seed=3, eq_params=params, workers=4)
        assert one.history == four.history
        assert one.result.trips_frame().equals(four.result.trips_frame())


class TestMetricsTracker:
    """Test the per-iteration series used for oscillation detection."""

    def test_consecutive_increases(self):
        tracker = MetricsTracker()
        for gap in (0.5, 0.2, 0.3, 0.4, 0.45):
            tracker.record('gap', gap)
        assert tracker.consecutive_increases('gap') == 3
        tracker.record('gap', 0.1)
        assert tracker.consecutive_increases('gap') == 0

    def test_statistics_and_trend(self):
        tracker = MetricsTracker()
        tracker.record_batch({'gap': 0.4, 'boardings': 10}, iteration=1)
        for gap in (0.3, 0.2, 0.1, 0.05, 0.02):
            tracker.record('gap', gap)
        stats = tracker.get_statistics('gap')
        assert stats['count'] == 6
        assert stats['min'] == pytest.approx(0.02)
        assert tracker.get_latest('gap') == pytest.approx(0.02)
        assert tracker.get_latest('missing') is None
        assert tracker.get_trend('gap') == 'decreasing'
        assert tracker.get_statistics('missing')['count'] == 0


class TestUncongestedConvergence:
    """Test that free-flowing traffic is at equilibrium from the start."""

    def test_gap_vanishes_by_second_iteration(self, tiny_population):
        graph = grid_graph(4, congestable=False)
        outcome = run_to_convergence(graph, tiny_population, seed=3,
                                     eq_params=EquilibriumParams(max_iters=2, min_iters=2, gap_target=1e-6))
        assert any(t.mode == Mode.DRIVE and t.arrival is not None for t in outcome.result.trips)
        assert outcome.history[-1]['gap'] < 1e-6
        assert outcome.converged


@pytest.fixture(scope='module')
def congested_city(toy_city):
    households = 400
    generator = ToyCityGenerator(size=toy_city.size)
    feed = GtfsParser().parse(toy_city.gtfs_dir)
    graph = GraphBuilder(NetworkParams(capacity_scale=generator.capacity_scale(households))).build(
        toy_city.network_dir, feed.patterns, feed.stops)
    population = synthesize_population(PopulationConfig(households=households, zone_weights=toy_city.zone_weights,
                                                        job_weights=toy_city.job_weights), seed=9)
    return graph, population, ChoiceParams(zone_attraction=toy_city.attraction)


def run_city(congested_city, **params):
    graph, population, choice = congested_city
    return run_to_convergence(graph, population, seed=9, choice_params=choice,
                              eq_params=EquilibriumParams(min_iters=1, **params))


@pytest.mark.slow
class TestCongestedConvergence:
    """Test the outer loop on a congested toy city."""

    def test_gap_falls(self, congested_city):
        outcome = run_city(congested_city, max_iters=20, gap_target=0.05)
        gaps = outcome.iterations_frame().gap.tolist()
        assert gaps[0] > 0
        assert outcome.converged or gaps[9] < gaps[0]

    def test_fixed_step_against_msa(self, congested_city):
        msa = run_city(congested_city, max_iters=6, gap_target=0.0)
        fixed = run_city(congested_city, max_iters=6, gap_target=0.0, alpha_schedule='fixed', alpha=0.3)
        msa_frame, fixed_frame = msa.iterations_frame(), fixed.iterations_frame()

        assert msa_frame.alpha.iloc[1] == pytest.approx(0.5) and fixed_frame.alpha.iloc[1] == pytest.approx(0.3)
        for alpha in fixed_frame.alpha:
            assert any(alpha == pytest.approx(0.3 * s) for s in (1.0, 0.5, 0.25))
        # iteration 1 runs on free-flow times under either schedule
        assert msa_frame.gap.iloc[0] == fixed_frame.gap.iloc[0]
        assert msa_frame.vehicle_hours.iloc[0] == fixed_frame.vehicle_hours.iloc[0]
        for frame in (msa_frame, fixed_frame):
            assert frame.gap.iloc[1:].min() < frame.gap.iloc[0]
