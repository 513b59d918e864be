"""
CLI Package
===========

Pipeline driver: run config, stage orchestration and artifact persistence.

Modules:
-------
- config.py: RunConfig, PathsConfig, load_run_config
- settings.py: environment settings (TRANSITSIM_*)
- pipeline.py: Pipeline (build, synthesize, run, compare, route)
- main.py: argparse entry point ``transit-sim``
"""

from .config import PathsConfig, RunConfig, Stage, load_run_config
from .pipeline import Pipeline

__all__ = ['PathsConfig', 'Pipeline', 'RunConfig', 'Stage', 'load_run_config']
