"""
Choice Models
=============

Multinomial-logit destination choice and nested-logit mode choice.

Purpose:
--------
- ``choose_destination``: P(z) proportional to exp(beta_tt * tt(o, z) + ln A_z)
- ``choose_mode``: nests {auto: drive}, {transit: walk/drive to transit},
  {active: walk, bike}, computed in log space
- Draws use a single uniform so a fixed substream gives common random
  numbers across iterations

Usage:
------
    from demand.choice import ChoiceParams, choose_mode, mode_probabilities

    probs = mode_probabilities(los_table, available, ChoiceParams())
    mode = choose_mode(los_table, available, ChoiceParams(), rng)
"""

import math
from typing import Dict, Iterable, List, Mapping, Optional, Sequence

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator
from scipy.special import logsumexp, softmax

from router.los import LevelOfService
from router.plan import PERSON_MODES, Mode
from utils.errors import DemandError, UntravelableTrip

from .activities import Activity, ActivityType


class NestSpec(BaseModel):
    model_config = ConfigDict(extra='forbid')

    modes: List[Mode]
    scale: float = Field(default=1.0, gt=0, le=1)


def default_nests() -> Dict[str, NestSpec]:
    return {
        'auto': NestSpec(modes=[Mode.DRIVE], scale=1.0),
        'transit': NestSpec(modes=[Mode.WALK_TO_TRANSIT, Mode.DRIVE_TO_TRANSIT], scale=0.7),
        'active': NestSpec(modes=[Mode.WALK, Mode.BIKE], scale=0.8),
    }


def default_constants() -> Dict[Mode, float]:
    return {Mode.DRIVE: 0.0, Mode.WALK_TO_TRANSIT: -0.3, Mode.DRIVE_TO_TRANSIT: -1.0,
            Mode.WALK: -0.5, Mode.BIKE: -1.5}


class ChoiceParams(BaseModel):
    """Mode utility coefficients (per minute / per $), nests and destination choice."""
    model_config = ConfigDict(extra='forbid')

    beta_ivt: float = Field(default=-0.03, le=0)
    beta_wait: float = Field(default=-0.06, le=0)
    beta_walk: float = Field(default=-0.06, le=0)
    beta_cost: float = Field(default=-0.25, le=0)
    constants: Dict[Mode, float] = Field(default_factory=default_constants)
    nests: Dict[str, NestSpec] = Field(default_factory=default_nests)
    beta_tt_destination: float = Field(default=-0.05, le=0, description='per minute of drive time')
    zone_attraction: Dict[int, float] = Field(default_factory=dict)
    type_attraction: Dict[ActivityType, Dict[int, float]] = Field(default_factory=dict)

    @model_validator(mode='after')
    def _check_nests(self):
        seen: List[Mode] = []
        for spec in self.nests.values():
            seen.extend(spec.modes)
        if len(seen) != len(set(seen)):
            raise ValueError('a mode belongs to more than one nest')
        missing = set(PERSON_MODES) - set(seen)
        if missing:
            raise ValueError(f"modes without a nest: {sorted(m.value for m in missing)}")
        return self

    @field_validator('zone_attraction')
    @classmethod
    def _check_attraction(cls, v):
        if any(a < 0 for a in v.values()):
            raise ValueError('attraction sizes must be non-negative')
        return v

    def attraction(self, kind: ActivityType) -> Mapping[int, float]:
        return self.type_attraction.get(kind, self.zone_attraction)


def utility(los: LevelOfService, params: ChoiceParams) -> float:
    return (params.constants.get(los.mode, 0.0)
            + params.beta_ivt * los.in_vehicle / 60.0
            + params.beta_wait * los.wait / 60.0
            + params.beta_walk * los.walk / 60.0
            + params.beta_cost * los.cost)


def nested_logit_probabilities(utilities: Mapping[Mode, float], params: ChoiceParams) -> Dict[Mode, float]:
    """Exact nested-logit probabilities over the modes in ``utilities``."""
    nest_terms = []
    for spec in params.nests.values():
        leaves = [m for m in spec.modes if m in utilities]
        if not leaves:
            continue
        scaled = np.array([utilities[m] for m in leaves]) / spec.scale
        nest_terms.append((leaves, scaled, spec.scale * float(logsumexp(scaled))))
    if not nest_terms:
        return {}
    top = softmax(np.array([t[2] for t in nest_terms]))
    probs: Dict[Mode, float] = {}
    for p_nest, (leaves, scaled, _) in zip(top, nest_terms):
        for m, p_leaf in zip(leaves, softmax(scaled)):
            probs[m] = float(p_nest * p_leaf)
    return probs


def mode_probabilities(los: Mapping[Mode, LevelOfService], available: Iterable[Mode],
                       params: ChoiceParams) -> Dict[Mode, float]:
    allowed = set(available)
    utilities = {m: utility(los[m], params) for m in PERSON_MODES
                 if m in allowed and m in los and los[m].available}
    return nested_logit_probabilities(utilities, params)


def _draw(keys: Sequence, probs: Sequence[float], u: float):
    cumulative = 0.0
    for key, p in zip(keys, probs):
        cumulative += p
        if u < cumulative:
            return key
    return keys[-1]


def choose_mode(los: Mapping[Mode, LevelOfService], available: Iterable[Mode], params: ChoiceParams,
                rng: np.random.Generator, context: Optional[Dict] = None) -> Mode:
    """
    Draw a mode from the nested logit.

    Raises:
        UntravelableTrip: no mode is both allowed and reachable
    """
    probs = mode_probabilities(los, available, params)
    if not probs:
        raise UntravelableTrip('no available mode', context)
    keys = [m for m in PERSON_MODES if m in probs]
    return _draw(keys, [probs[m] for m in keys], rng.random())


def destination_probabilities(kind: ActivityType, origin_zone: int, skims, params: ChoiceParams) -> Dict[int, float]:
    zones = list(skims.zone_ids)
    attraction = params.attraction(kind)
    times = skims.row(origin_zone)
    v = np.full(len(zones), -np.inf)
    for i, z in enumerate(zones):
        a = attraction.get(z, 0.0) if attraction else 1.0
        tt = float(times[i])
        if a > 0 and math.isfinite(tt):
            v[i] = params.beta_tt_destination * tt / 60.0 + math.log(a)
    if not np.isfinite(v).any():
        raise DemandError(f"no reachable destination from zone {origin_zone} for {kind.value}")
    p = softmax(v)
    return {z: float(pz) for z, pz in zip(zones, p)}


def choose_destination(activity: Activity, origin_zone: int, skims, params: ChoiceParams,
                       rng: np.random.Generator) -> int:
    """
    Location zone of ``activity``; activities with a fixed zone (work, school,
    work at home) keep it.

    Raises:
        DemandError: every destination has utility -inf
    """
    if activity.location_zone is not None:
        return activity.location_zone
    probs = destination_probabilities(activity.type, origin_zone, skims, params)
    zones = list(probs)
    return _draw(zones, [probs[z] for z in zones], rng.random())
