"""
Run Configuration
=================

One JSON (or YAML) document drives every stage. Each block is validated by the
parameter model of the package that owns it; unknown keys are rejected.

Usage:
------
    from cli.config import load_run_config

    cfg = load_run_config('toy/config.json')
    cfg.paths.output_dir, cfg.scenario('transit_removal')
    cfg.stage_hash('build')

Key Features:
------------
- Relative paths resolve against the config file's directory
- Referenced input directories must exist at load; the output directory is created
- Stage hashes cover only the blocks a stage depends on, so editing the
  economics block does not invalidate built graphs
"""

import json
from enum import Enum
from pathlib import Path
from typing import Any, Dict, List, Optional, Union

import yaml
from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator, model_validator

from analytics.assumptions import EconomicAssumptions
from demand.activities import ActivityParams
from demand.choice import ChoiceParams
from demand.population import PopulationConfig
from demand.trucks import TruckConfig
from equilibrium.params import EquilibriumParams
from network.params import NetworkParams
from router.params import RouterParams
from scenario.spec import BASELINE, ScenarioSpec, default_scenarios
from simcore.params import SimulationParams
from utils.errors import ConfigError
from utils.io import config_hash


class Stage(str, Enum):
    BUILD = 'build'
    SYNTHESIZE = 'synthesize'
    RUN = 'run'
    COMPARE = 'compare'


class PathsConfig(BaseModel):
    model_config = ConfigDict(extra='forbid')

    network_dir: Path
    gtfs_dir: Optional[Path] = None
    output_dir: Path = Path('output')

    @field_validator('network_dir', 'gtfs_dir')
    @classmethod
    def _must_exist(cls, v: Optional[Path], info):
        if v is not None and not v.is_dir():
            raise ValueError(f"{info.field_name} does not exist: {v}")
        return v


# blocks each stage's artifacts depend on
_STAGE_BLOCKS = {
    Stage.BUILD: ('paths', 'network', 'scenarios', 'simulation'),
    Stage.SYNTHESIZE: ('paths', 'seed', 'population'),
}


class RunConfig(BaseModel):
    """Validated run configuration."""
    model_config = ConfigDict(extra='forbid')

    seed: int = Field(default=0, ge=0)
    workers: int = Field(default=1, ge=1, description='never changes results')
    stages: List[Stage] = Field(default_factory=lambda: list(Stage))
    paths: PathsConfig
    masks: Dict[str, List[int]] = Field(default_factory=dict, description='reporting masks (zone ids)')
    network: NetworkParams = Field(default_factory=NetworkParams)
    population: PopulationConfig = Field(default_factory=PopulationConfig)
    activities: ActivityParams = Field(default_factory=ActivityParams)
    choice: ChoiceParams = Field(default_factory=ChoiceParams)
    router: RouterParams = Field(default_factory=RouterParams)
    simulation: SimulationParams = Field(default_factory=SimulationParams)
    equilibrium: EquilibriumParams = Field(default_factory=EquilibriumParams)
    trucks: TruckConfig = Field(default_factory=TruckConfig)
    scenarios: List[ScenarioSpec] = Field(default_factory=default_scenarios)
    economics: EconomicAssumptions = Field(default_factory=EconomicAssumptions)

    @model_validator(mode='after')
    def _check_scenarios(self):
        names = [s.name for s in self.scenarios]
        if len(set(names)) != len(names):
            raise ValueError(f"duplicate scenario names in {names}")
        if BASELINE not in names:
            raise ValueError("a 'baseline' scenario is required")
        return self

    def scenario(self, name: str) -> ScenarioSpec:
        for spec in self.scenarios:
            if spec.name == name:
                return spec
        raise ConfigError(f"Unknown scenario '{name}' (configured: {[s.name for s in self.scenarios]})")

    def masks_for(self, *names: str) -> Dict[str, List[int]]:
        """Config-level masks overlaid with the masks of the named scenarios."""
        masks = dict(self.masks)
        for name in names:
            masks.update(self.scenario(name).masks)
        return dict(sorted(masks.items()))

    def choice_for(self, spec: ScenarioSpec) -> ChoiceParams:
        return ChoiceParams.model_validate({**self.choice.model_dump(), **spec.choice_overrides})

    def simulation_for(self, spec: ScenarioSpec) -> SimulationParams:
        return SimulationParams.model_validate({**self.simulation.model_dump(), **spec.simulation_overrides})

    def hashable(self) -> Dict[str, Any]:
        return self.model_dump(mode='json', exclude={'workers': True, 'paths': {'output_dir'}})

    @property
    def config_hash(self) -> str:
        return config_hash(self.hashable())

    def stage_hash(self, stage: Union[Stage, str]) -> str:
        stage = Stage(stage)
        data = self.hashable()
        blocks = _STAGE_BLOCKS.get(stage)
        if blocks is None:
            return self.config_hash
        if stage == Stage.BUILD:
            data['simulation'] = {'dt': data['simulation']['dt']}
            data['scenarios'] = [{'name': s['name'], 'transit_removal': s['transit_removal']}
                                 for s in data['scenarios']]
        if stage == Stage.SYNTHESIZE:
            data['paths'] = {}
        return config_hash({k: data[k] for k in blocks})


def _read_document(path: Path) -> Dict[str, Any]:
    with open(path, 'r', encoding='utf-8') as f:
        if path.suffix in ('.yaml', '.yml'):
            return yaml.safe_load(f) or {}
        return json.load(f)


def _resolve_paths(raw: Dict[str, Any], base: Path) -> Dict[str, Any]:
    paths = dict(raw.get('paths') or {})
    paths.setdefault('output_dir', 'output')
    for key in ('network_dir', 'gtfs_dir', 'output_dir'):
        if paths.get(key) is not None and not Path(paths[key]).is_absolute():
            paths[key] = str((base / paths[key]).resolve())
    return {**raw, 'paths': paths}


def load_run_config(path: Union[str, Path], output_dir: Optional[Union[str, Path]] = None) -> RunConfig:
    """
    Read, resolve and validate a run config.

    Raises:
        FileNotFoundError: the config file is missing
        pydantic.ValidationError: a block is invalid or carries unknown keys
    """
    path = Path(path)
    if not path.exists():
        raise FileNotFoundError(f"Config file not found: {path}")
    raw = _resolve_paths(_read_document(path), path.parent.resolve())
    if output_dir is not None:
        raw['paths']['output_dir'] = str(Path(output_dir).resolve())
    cfg = RunConfig.model_validate(raw)
    cfg.paths.output_dir.mkdir(parents=True, exist_ok=True)
    return cfg


__all__ = ['PathsConfig', 'RunConfig', 'Stage', 'ValidationError', 'load_run_config']
