"""
Configuration Package
=====================

YAML files shipped with the simulator.

Files:
- logging_config.yaml: dictConfig for console/file handlers (text and JSON formatters)
- model_config.yaml: documented defaults of every run-config block

Usage:
    from config import load_config
    defaults = load_config('model_config.yaml')
"""

from pathlib import Path

import yaml


def load_config(config_name: str) -> dict:
    """
    Load a YAML configuration file from the config directory.

    Raises:
        FileNotFoundError: no such file in the config directory
    """
    config_path = get_config_path(config_name)
    if not config_path.exists():
        raise FileNotFoundError(f"Configuration file not found: {config_path}")
    with open(config_path, 'r') as f:
        return yaml.safe_load(f)


def get_config_path(config_name: str) -> Path:
    """Get the full path to a configuration file."""
    return Path(__file__).parent / config_name
