"""
Utils Package
=============

Shared plumbing: errors, logging, metrics, seeded substreams, artifact I/O
and the ordered parallel map.

Modules:
-------
- errors.py: exception hierarchy
- logger.py: logging setup, ContextLogger, PerformanceLogger
- metrics.py: MetricsTracker
- rng.py: seeded substreams
- io.py: hashed CSV/JSON artifacts
- parallel.py: ordered_map
"""

from .errors import (
    ArtifactMismatchError,
    ConfigError,
    DemandError,
    GtfsParseError,
    NetworkError,
    SimulationDeadlock,
    StaleArtifactError,
    TransitSimError,
    UntravelableTrip,
)
from .logger import ContextLogger, PerformanceLogger, setup_logging
from .metrics import MetricsTracker
from .parallel import ordered_map
from .rng import substream

__all__ = [
    'ArtifactMismatchError',
    'ConfigError',
    'DemandError',
    'GtfsParseError',
    'NetworkError',
    'SimulationDeadlock',
    'StaleArtifactError',
    'TransitSimError',
    'UntravelableTrip',
    'ContextLogger',
    'PerformanceLogger',
    'setup_logging',
    'MetricsTracker',
    'ordered_map',
    'substream',
]
