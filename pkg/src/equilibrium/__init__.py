"""
Equilibrium Package
===================

Outer loop between routing on historical times and simulated experience.

Modules:
-------
- params.py: EquilibriumParams and the alpha schedule
- mixing.py: mix_times, relative_gap
- planner.py: TripPlanner (mode choice + routing per iteration)
- loop.py: run_to_convergence
"""

from .loop import EquilibriumOutcome, IterationState, day_kpis, mean_speed_kmh, run_to_convergence
from .mixing import gap_from_costs, mix_times, relative_gap
from .params import AlphaSchedule, EquilibriumParams
from .planner import TripPlanner, available_modes

__all__ = [
    'AlphaSchedule',
    'EquilibriumOutcome',
    'EquilibriumParams',
    'IterationState',
    'TripPlanner',
    'available_modes',
    'day_kpis',
    'gap_from_costs',
    'mean_speed_kmh',
    'mix_times',
    'relative_gap',
    'run_to_convergence',
]
