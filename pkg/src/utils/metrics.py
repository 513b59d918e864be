"""
Metrics Module
==============

Per-iteration KPI tracking for the equilibrium loop and the day simulator.

Usage:
------
    from utils.metrics import MetricsTracker

    metrics = MetricsTracker()
    metrics.record('relative_gap', 0.12, iteration=1)
    metrics.record('relative_gap', 0.07, iteration=2)

    metrics.get_latest('relative_gap')          # 0.07
    metrics.consecutive_increases('relative_gap')  # 0
    metrics.get_statistics('relative_gap')

Key Features:
------------
- Multi-metric tracking
- Summary statistics (numpy)
- Trend and run-length detection for divergence monitoring
"""

import logging
from collections import defaultdict
from typing import Dict, List, Optional

import numpy as np


class MetricsTracker:
    """
    Records named scalar series and answers simple questions about them.
    """

    def __init__(self):
        self.logger = logging.getLogger('utils.MetricsTracker')
        self.metrics: Dict[str, List[float]] = defaultdict(list)

    def record(self, name: str, value: float, iteration: Optional[int] = None) -> None:
        """
        Record a metric value.

        Args:
            name (str): Metric name
            value (float): Metric value
            iteration (int, optional): Outer iteration index
        """
        self.metrics[name].append(float(value))
        suffix = f" (iteration {iteration})" if iteration is not None else ""
        self.logger.debug(f"Recorded {name}: {value}{suffix}")

    def record_batch(self, values: Dict[str, float], iteration: Optional[int] = None) -> None:
        for name, value in values.items():
            self.record(name, value, iteration)

    def get_latest(self, name: str) -> Optional[float]:
        values = self.metrics.get(name, [])
        return values[-1] if values else None

    def get_statistics(self, name: str) -> Dict[str, float]:
        """
        Summary statistics of a metric (count, mean, std, min, max, median).
        """
        values = self.metrics.get(name, [])
        if not values:
            return {'count': 0, 'mean': 0.0, 'std': 0.0, 'min': 0.0, 'max': 0.0, 'median': 0.0}
        arr = np.asarray(values, dtype=float)
        return {
            'count': int(arr.size),
            'mean': float(arr.mean()),
            'std': float(arr.std()),
            'min': float(arr.min()),
            'max': float(arr.max()),
            'median': float(np.median(arr)),
        }

    def get_trend(self, name: str, window: int = 6) -> str:
        """
        'increasing', 'decreasing' or 'stable' over the last ``window`` values.
        """
        values = self.metrics.get(name, [])
        if len(values) < window:
            return 'stable'
        recent = values[-window:]
        first_half = np.mean(recent[:window // 2])
        second_half = np.mean(recent[window // 2:])
        change = (second_half - first_half) / (abs(first_half) + 1e-12)
        if change > 0.05:
            return 'increasing'
        if change < -0.05:
            return 'decreasing'
        return 'stable'

    def consecutive_increases(self, name: str) -> int:
        """Number of strict increases ending at the latest value."""
        values = self.metrics.get(name, [])
        count = 0
        for i in range(len(values) - 1, 0, -1):
            if values[i] > values[i - 1]:
                count += 1
            else:
                break
        return count

    def __repr__(self) -> str:
        return f"MetricsTracker(metrics={len(self.metrics)})"
