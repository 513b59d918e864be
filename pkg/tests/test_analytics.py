"""
Test Analytics Module
=====================

Activity tables, equity shares, economic impact and congestion KPIs.

Usage:
    python -m pytest tests/test_analytics.py
"""

import numpy as np
import pandas as pd
import pytest

from analytics.assumptions import EconomicAssumptions
from analytics.congestion import congestion_deltas, congestion_kpis, mode_share, speed_profile
from analytics.economics import economic_impact, spending_reductions
from analytics.equity import equity_shares
from analytics.report import RunArtifacts, build_report
from analytics.tables import (
    cancellation_rates, cancellation_table, care_delta, care_delta_from_counts, group_changes, percent_change,
    performed_counts, table_from_counts,
)
from conftest import corridor_graph
from simcore.replan import ActivityOutcome, CancelReason, OutcomeStatus
from utils.errors import ArtifactMismatchError, ConfigError

K, M = 1e3, 1e6

REGION_BASELINE = {
    'eat_out': 2.15 * M, 'errands': 1.28 * M, 'ev_charging': 0.3 * K, 'healthcare': 893.7 * K,
    'leisure': 1.67 * M, 'part_time_work': 650.9 * K, 'personal': 327.4 * K, 'pickup_dropoff': 2.30 * M,
    'religious_civic': 386.1 * K, 'school': 1.91 * M, 'service': 509.3 * K, 'shop_major': 666.5 * K,
    'shop_other': 2.79 * M, 'social': 1.18 * M, 'work': 4.23 * M, 'work_at_home': 862.9 * K,
}
REGION_REMOVAL = {
    'eat_out': 1.93 * M, 'errands': 1.22 * M, 'ev_charging': 0.4 * K, 'healthcare': 845.2 * K,
    'leisure': 1.42 * M, 'part_time_work': 629.4 * K, 'personal': 304.4 * K, 'pickup_dropoff': 1.73 * M,
    'religious_civic': 330.7 * K, 'school': 1.90 * M, 'service': 473.5 * K, 'shop_major': 624.0 * K,
    'shop_other': 2.58 * M, 'social': 1.01 * M, 'work': 4.06 * M, 'work_at_home': 848.6 * K,
}
CITY_BASELINE = {
    'eat_out': 581.3 * K, 'errands': 336.9 * K, 'ev_charging': 0.1 * K, 'healthcare': 231.6 * K,
    'leisure': 438.6 * K, 'part_time_work': 155.5 * K, 'personal': 86.4 * K, 'pickup_dropoff': 578.2 * K,
    'religious_civic': 104.1 * K, 'school': 490.9 * K, 'service': 132.4 * K, 'shop_major': 176.6 * K,
    'shop_other': 750.0 * K, 'social': 313.7 * K, 'work': 1.15 * M, 'work_at_home': 253.2 * K,
}
CITY_REMOVAL = {
    'eat_out': 422.3 * K, 'errands': 272.9 * K, 'ev_charging': 0.1 * K, 'healthcare': 187.4 * K,
    'leisure': 296.0 * K, 'part_time_work': 141.3 * K, 'personal': 67.3 * K, 'pickup_dropoff': 382.6 * K,
    'religious_civic': 72.3 * K, 'school': 485.1 * K, 'service': 103.2 * K, 'shop_major': 136.4 * K,
    'shop_other': 574.8 * K, 'social': 211.1 * K, 'work': 1.03 * M, 'work_at_home': 242.6 * K,
}


def outcome(aid, pid, kind, status='completed', zone=1):
    status = OutcomeStatus(status)
    reason = CancelReason.TOO_LATE if status == OutcomeStatus.CANCELLED else CancelReason.NONE
    start = None if status == OutcomeStatus.CANCELLED else 36000.0
    return ActivityOutcome(aid, pid, kind, status, start, 3600.0, reason, 36000.0, 3600.0, zone)


class TestActivityTables:
    """Test performed-activity tables and percent changes."""

    def test_percent_change(self):
        assert percent_change(200.0, 150.0) == pytest.approx(-25.0)
        assert percent_change(0.0, 5.0) is None

    def test_region_table(self):
        table = table_from_counts(REGION_BASELINE, REGION_REMOVAL)
        assert table.total.baseline == pytest.approx(21.80 * M, rel=1e-3)
        assert table.total.scenario == pytest.approx(19.91 * M, rel=1e-3)
        # component values are rounded to three digits
        assert table.total.pct_change == pytest.approx(-8.6, abs=0.15)
        assert table.row('pickup_dropoff').pct_change == pytest.approx(-24.78, abs=0.01)
        assert table.row('school').pct_change == pytest.approx(-0.52, abs=0.01)
        assert table.row('ev_charging').pct_change > 0

    def test_city_table(self):
        table = table_from_counts(CITY_BASELINE, CITY_REMOVAL, name='city')
        assert table.total.baseline == pytest.approx(5.78 * M, rel=1e-3)
        assert table.total.scenario == pytest.approx(4.63 * M, rel=2e-3)
        assert table.total.pct_change == pytest.approx(-19.9, abs=0.1)
        assert table.row('leisure').pct_change == pytest.approx(-32.51, abs=0.01)

    def test_care_delta(self):
        care = care_delta_from_counts(REGION_BASELINE, REGION_REMOVAL)
        assert care.pct_drop == pytest.approx(10.37, abs=0.01)
        assert care.lost == pytest.approx(731.0 * K, rel=1e-6)

    def test_frame_layout(self):
        frame = table_from_counts(REGION_BASELINE, REGION_REMOVAL).to_frame()
        assert list(frame.columns) == ['activity_type', 'baseline', 'scenario', 'pct_change']
        assert len(frame) == 17
        assert frame.activity_type.iloc[-1] == 'total'

    def test_from_outcomes_with_mask(self):
        base = [outcome(1, 1, 'work', zone=1), outcome(2, 1, 'shop_other', zone=2), outcome(3, 2, 'school', zone=2)]
        scen = [outcome(1, 1, 'work', zone=1), outcome(2, 1, 'shop_other', 'cancelled', zone=2),
                outcome(3, 2, 'school', 'shortened', zone=2)]
        region = cancellation_table(base, scen)
        assert region.total.baseline == 3 and region.total.scenario == 2
        city = cancellation_table(base, scen, mask=[2], name='city')
        assert city.row('shop_other').scenario == 0
        assert city.row('work').baseline == 0
        assert city.total.pct_change == pytest.approx(-50.0)

    def test_rows_and_objects_agree(self):
        outcomes = [outcome(1, 1, 'work'), outcome(2, 1, 'leisure', 'cancelled'), outcome(3, 1, 'leisure')]
        assert performed_counts(outcomes) == performed_counts([o.to_dict() for o in outcomes])

    def test_group_changes(self):
        table = table_from_counts({'work': 100, 'leisure': 100}, {'work': 90, 'leisure': 50})
        changes = group_changes(table)
        assert changes['work_school'] == pytest.approx(-10.0)
        assert changes['non_work'] == pytest.approx(-50.0)
        assert changes['overall'] == pytest.approx(-30.0)

    def test_cancellation_rates(self):
        rates = cancellation_rates([outcome(1, 1, 'work', 'cancelled'), outcome(2, 1, 'work'),
                                    outcome(3, 1, 'leisure', 'cancelled'), outcome(4, 1, 'eat_out', 'postponed')])
        assert rates == {'work_school': 50.0, 'non_work': 50.0, 'overall': 50.0}

    def test_care_from_outcomes(self):
        base = [outcome(1, 1, 'errands'), outcome(2, 1, 'healthcare'), outcome(3, 1, 'leisure')]
        scen = [outcome(1, 1, 'errands', 'cancelled'), outcome(2, 1, 'healthcare'), outcome(3, 1, 'leisure')]
        care = care_delta(base, scen)
        assert (care.baseline, care.scenario) == (2.0, 1.0)
        assert care.pct_drop == pytest.approx(50.0)


class TestEquity:
    """Test cancellation shares by gender, income and zone."""

    def test_shares(self, small_population):
        woman = next(p for p in small_population.persons if p.gender.value == 'female')
        man = next(p for p in small_population.persons if p.gender.value == 'male')
        cancelled = [outcome(1, woman.id, 'work', 'cancelled', zone=3),
                     outcome(2, woman.id, 'shop_other', 'cancelled', zone=3),
                     outcome(3, man.id, 'leisure', 'cancelled', zone=4)]
        report = equity_shares(cancelled, small_population)

        assert report.total == 3 and report.non_work_total == 2
        assert report.gender['female']['overall'] == pytest.approx(200.0 / 3.0)
        assert report.gender['female']['non_work'] == pytest.approx(50.0)
        assert report.gender['male']['non_work'] == pytest.approx(50.0)
        assert sum(v['overall'] for v in report.quintile.values()) == pytest.approx(100.0)
        assert report.activity_zone == {3: 2, 4: 1}
        assert sum(report.household_zone.values()) == 3
        assert report.top_zones('activity', 1) == [(3, 2)]

    def test_empty(self, small_population):
        report = equity_shares([], small_population)
        assert report.total == 0
        assert report.gender['female']['overall'] is None
        assert report.lowest_two_quintiles() is None


class TestEconomics:
    """Test the annualized loss components."""

    def test_region_figures(self):
        reductions = {'entertainment': 0.148, 'food_away': 0.101, 'apparel_services': 0.066}
        impact = economic_impact(1.3e6, 0.7e6, 1.9e6, reductions, EconomicAssumptions())

        assert impact.vot_loss == pytest.approx(15.06e9, rel=1e-3)
        assert impact.transit_gain == pytest.approx(4.66e9, rel=1e-3)
        assert impact.net_vot == pytest.approx(10.41e9, rel=1e-3)
        assert impact.car_cost == pytest.approx(20.38e9, rel=1e-3)
        assert impact.spending_total == pytest.approx(4.6e9, rel=1e-3)
        assert impact.grand_total == pytest.approx(35.4e9, rel=2e-3)
        assert impact.funding_ratio == pytest.approx(13.1, abs=0.05)

    def test_frame_ends_with_total(self):
        impact = economic_impact(1.0, 0.0, 0.0, {'food_away': 0.1})
        frame = impact.to_frame()
        assert frame.component.iloc[-1] == 'grand_total'
        assert frame.billion_usd.iloc[-1] == pytest.approx(round(impact.grand_total / 1e9, 6))

    def test_population_scale(self):
        a = EconomicAssumptions(population_scale=10.0)
        assert economic_impact(1.0, 0.0, 1.0, {}, a).car_cost == pytest.approx(10 * 10728.0)

    def test_unknown_category(self):
        with pytest.raises(ConfigError):
            economic_impact(0.0, 0.0, 0.0, {'jewelry': 0.1})

    def test_household_count_required(self):
        with pytest.raises(ConfigError):
            economic_impact(0.0, 0.0, 0.0, {'food_away': 0.1}, EconomicAssumptions(households=None))
        impact = economic_impact(0.0, 0.0, 0.0, {'food_away': 0.1}, EconomicAssumptions(households=None),
                                 households=100.0)
        assert impact.spending['food_away'] == pytest.approx(100.0 * 4169.0 * 0.1)

    def test_baseline_weighted_reductions(self):
        base = {'shop_major': 100, 'shop_other': 300, 'errands': 100, 'leisure': 50, 'eat_out': 0}
        scen = {'shop_major': 90, 'shop_other': 240, 'errands': 100, 'leisure': 25, 'eat_out': 0}
        reductions = spending_reductions(base, scen)
        assert reductions['apparel_services'] == pytest.approx(70.0 / 500.0)
        assert reductions['entertainment'] == pytest.approx(0.5)
        assert reductions['food_away'] == 0.0


def link_times_frame(rows):
    return pd.DataFrame(rows, columns=['link_id', 'bin', 'mean_time', 'count'])


def trips_frame(rows):
    return pd.DataFrame(rows, columns=['mode', 'status', 'experienced', 'origin_node', 'destination_node'])


class TestCongestion:
    """Test speed, travel time and mode share KPIs."""

    def test_distance_weighted_speed(self):
        graph = corridor_graph(2, 500.0)
        links = link_times_frame([(1, 32, 50.0, 2), (2, 32, 100.0, 2)])
        trips = trips_frame([('drive', 'arrived', 150.0, 1, 3), ('drive', 'arrived', 250.0, 1, 3),
                             ('walk', 'arrived', 900.0, 1, 3), ('drive', 'unfinished', 5000.0, 1, 3)])
        kpis = congestion_kpis(links, trips, graph)
        assert kpis.mean_speed_kmh == pytest.approx(2000.0 / 300.0 * 3.6)
        assert kpis.mean_travel_time_s == pytest.approx(200.0)
        assert kpis.n_trips == 2

    def test_empty_mask(self):
        graph = corridor_graph(2, 500.0)
        kpis = congestion_kpis(link_times_frame([(1, 32, 50.0, 2)]), trips_frame([]), graph, mask=[7])
        assert kpis.mean_speed_kmh is None and kpis.mean_travel_time_s is None

    def test_deltas(self):
        graph = corridor_graph(1, 500.0)
        base = congestion_kpis(link_times_frame([(1, 0, 50.0, 1)]), trips_frame([]), graph)
        slow = congestion_kpis(link_times_frame([(1, 0, 100.0, 1)]), trips_frame([]), graph)
        deltas = congestion_deltas(base, slow)
        assert deltas['speed_pct'] == pytest.approx(-50.0)
        assert deltas['travel_time_pct'] is None

    def test_speed_profile(self):
        graph = corridor_graph(2, 500.0)
        profile = speed_profile(link_times_frame([(1, 32, 50.0, 1), (2, 33, 25.0, 1)]), graph)
        assert profile.speed_kmh.iloc[32] == pytest.approx(36.0)
        assert profile.speed_kmh.iloc[33] == pytest.approx(72.0)
        assert np.isnan(profile.speed_kmh.iloc[0])

    def test_mode_share(self):
        trips = trips_frame([('drive', 'arrived', 1, 1, 2), ('drive', 'arrived', 1, 1, 2),
                             ('walk_to_transit', 'arrived', 1, 1, 2), ('walk', 'arrived', 1, 1, 2),
                             ('bike', 'not_traveled', 1, 1, 2), ('', 'not_traveled', None, 1, 2)])
        shares = mode_share(trips)
        assert shares['drive'] == pytest.approx(50.0)
        assert shares['transit'] == pytest.approx(25.0)
        assert shares['bike'] == 0.0
        assert 'truck' not in shares


class TestReport:
    """Test comparison guards."""

    def test_population_mismatch(self, small_population):
        graph = corridor_graph()
        empty = pd.DataFrame()

        def run(name, pop_hash):
            return RunArtifacts(name, empty, empty, empty, {'population_hash': pop_hash}, small_population, graph)

        with pytest.raises(ArtifactMismatchError):
            build_report(run('baseline', 'aaa'), run('transit_removal', 'bbb'))
