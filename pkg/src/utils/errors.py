"""
Errors Module
=============

Exception hierarchy shared by every package of the simulator.

Usage:
------
    from utils.errors import ConfigError, GtfsParseError

    raise GtfsParseError('stops.txt', 'required file missing')

The CLI maps ``SimulationDeadlock`` and any non-``TransitSimError`` exception
to exit code 2, every other ``TransitSimError`` to exit code 1.
"""

from typing import Any, Dict, Optional


class TransitSimError(Exception):
    """Base class for all simulator errors."""


class ConfigError(TransitSimError):
    """Invalid or inconsistent configuration."""


class StaleArtifactError(ConfigError):
    """A persisted stage artifact was produced from a different configuration."""


class ArtifactMismatchError(TransitSimError):
    """Two runs being compared were produced from different populations."""


class GtfsParseError(TransitSimError):
    """Fatal GTFS problem (missing file or column)."""

    def __init__(self, file_name: str, message: str = 'required file missing'):
        self.file_name = file_name
        super().__init__(f"{file_name}: {message}")


class NetworkError(TransitSimError):
    """Invalid roadway element or unknown network id."""


class DemandError(TransitSimError):
    """Demand synthesis or choice cannot proceed."""


class UntravelableTrip(DemandError):
    """No mode is available for a trip."""

    def __init__(self, message: str = 'no available mode', context: Optional[Dict[str, Any]] = None):
        self.context = context or {}
        super().__init__(message)


class SimulationDeadlock(TransitSimError):
    """The day simulation stopped making progress with vehicles still in the network."""

    def __init__(self, message: str, dump: Optional[Dict[str, Any]] = None):
        self.dump = dump or {}
        super().__init__(message)
