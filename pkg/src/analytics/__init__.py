"""
Analytics Package
=================

KPIs and the comparison report between two scenario runs.

Modules:
-------
- assumptions.py: EconomicAssumptions
- tables.py: activity tables, cancellation rates, mobility-of-care delta
- equity.py: who cancels (gender, income quintile, zone)
- economics.py: value-of-time, car ownership and spending losses
- congestion.py: speed/travel-time KPIs, speed profile, mode share
- report.py: RunArtifacts, build_report, write_report
"""

from .assumptions import EconomicAssumptions
from .congestion import CongestionKpis, congestion_deltas, congestion_kpis, mode_share, speed_profile
from .economics import EconomicImpact, economic_impact, spending_reductions
from .equity import EquityReport, equity_shares
from .report import ImpactReport, RunArtifacts, build_report, write_report
from .tables import (CancellationTable, CareDelta, TableRow, cancellation_rates, cancellation_table,
                     care_delta, care_delta_from_counts, group_changes, percent_change, performed_counts,
                     table_from_counts)

__all__ = [
    'CancellationTable', 'CareDelta', 'CongestionKpis', 'EconomicAssumptions', 'EconomicImpact',
    'EquityReport', 'ImpactReport', 'RunArtifacts', 'TableRow', 'build_report', 'cancellation_rates',
    'cancellation_table', 'care_delta', 'care_delta_from_counts', 'congestion_deltas', 'congestion_kpis',
    'economic_impact', 'equity_shares', 'group_changes', 'mode_share', 'percent_change', 'performed_counts',
    'speed_profile', 'spending_reductions', 'table_from_counts', 'write_report',
]
