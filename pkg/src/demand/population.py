"""
Population Synthesis
====================

Config-driven synthetic households and persons.

Purpose:
--------
- Households with home zone, income, income quintile, vehicle ownership
- Persons with gender, age, worker/student flags and fixed work/school zones
- Allocation of household vehicles to licensed members

Usage:
------
    from demand.population import PopulationConfig, synthesize_population

    config = PopulationConfig(households=2000, zone_weights={1: 1.0, 2: 1.5})
    population = synthesize_population(config, seed=7)
    population.persons_frame().head()

Key Features:
------------
- Quota sampling of categorical marginals (zones, sizes, ownership, gender, roles)
- Income quintiles from realized ranks (equal-size groups, +-1 household)
- Deterministic for a fixed seed
"""

import logging
from dataclasses import dataclass, field, replace
from enum import Enum
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
import pandas as pd
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from utils.errors import ConfigError
from utils.rng import substream

from .sampling import normalized, quota_sample, weighted_choice

LICENSE_AGE = 16


class Gender(str, Enum):
    FEMALE = 'female'
    MALE = 'male'


class Role(str, Enum):
    WORKER = 'worker'
    STUDENT = 'student'
    OTHER = 'other'


# age ranges by role; the first member of a household draws from the adult part
AGE_RANGES = {Role.WORKER: (18, 74), Role.STUDENT: (5, 22), Role.OTHER: (18, 90)}
ADULT_AGE = 18


@dataclass(frozen=True)
class Household:
    id: int
    home_zone: int
    income: float
    income_quintile: int
    vehicles_owned: int
    person_ids: Tuple[int, ...]
    joint_travel: bool = False


@dataclass(frozen=True)
class Person:
    id: int
    household_id: int
    gender: Gender
    age: int
    worker: bool
    student: bool
    work_zone: Optional[int] = None
    school_zone: Optional[int] = None
    has_vehicle: bool = False

    @property
    def licensed(self) -> bool:
        return self.age >= LICENSE_AGE


def _distribution(v: Dict[int, float], name: str) -> Dict[int, float]:
    if not v:
        raise ValueError(f"{name} must not be empty")
    if any(p < 0 for p in v.values()):
        raise ValueError(f"{name} has negative weights")
    if sum(v.values()) <= 0:
        raise ValueError(f"{name} must have a positive sum")
    return {int(k): float(p) for k, p in v.items()}


class PopulationConfig(BaseModel):
    """Demographic marginals of the synthetic population."""
    model_config = ConfigDict(extra='forbid')

    households: int = Field(default=2000, ge=0)
    zone_weights: Dict[int, float] = Field(default_factory=dict)
    job_weights: Dict[int, float] = Field(default_factory=dict, description='work-zone weights; empty = zone_weights')
    household_size: Dict[int, float] = Field(
        default_factory=lambda: {1: 0.28, 2: 0.34, 3: 0.15, 4: 0.14, 5: 0.09})
    income_median: float = Field(default=65000.0, gt=0)
    income_sigma: float = Field(default=0.8, gt=0)
    vehicle_ownership: Dict[int, float] = Field(
        default_factory=lambda: {0: 0.12, 1: 0.35, 2: 0.38, 3: 0.15})
    female_share: float = Field(default=0.5, ge=0, le=1)
    worker_rate: float = Field(default=0.50929, ge=0, le=1)
    student_rate: float = Field(default=0.191, ge=0, le=1)
    joint_travel_rate: float = Field(default=0.1, ge=0, le=1)
    school_in_home_zone: float = Field(default=0.7, ge=0, le=1)

    @field_validator('household_size', 'vehicle_ownership')
    @classmethod
    def _check_distribution(cls, v, info):
        v = _distribution(v, info.field_name)
        if any(k < 0 for k in v) or (info.field_name == 'household_size' and any(k < 1 for k in v)):
            raise ValueError(f"{info.field_name} has invalid categories")
        return v

    @field_validator('zone_weights', 'job_weights')
    @classmethod
    def _check_zones(cls, v):
        if any(w < 0 for w in v.values()):
            raise ValueError('zone weights must be non-negative')
        return {int(k): float(w) for k, w in v.items()}

    @model_validator(mode='after')
    def _check_roles(self):
        if self.worker_rate + self.student_rate > 1.0 + 1e-12:
            raise ValueError('worker_rate + student_rate must not exceed 1')
        return self


@dataclass
class Population:
    households: List[Household]
    persons: List[Person]
    _by_id: Dict[int, Person] = field(default_factory=dict, init=False, repr=False)
    _households: Dict[int, Household] = field(default_factory=dict, init=False, repr=False)

    def __post_init__(self):
        self._by_id = {p.id: p for p in self.persons}
        self._households = {h.id: h for h in self.households}

    def person(self, person_id: int) -> Person:
        return self._by_id[person_id]

    def household(self, household_id: int) -> Household:
        return self._households[household_id]

    def household_of(self, person: Person) -> Household:
        return self._households[person.household_id]

    def car_available(self, person: Person) -> bool:
        return car_available(person, self.household_of(person))

    def ownership_histogram(self) -> Dict[str, int]:
        """Households by vehicles owned: 0, 1, 2, 3+."""
        hist = {'0': 0, '1': 0, '2': 0, '3+': 0}
        for h in self.households:
            hist[str(h.vehicles_owned) if h.vehicles_owned < 3 else '3+'] += 1
        return hist

    @property
    def total_vehicles(self) -> int:
        return sum(h.vehicles_owned for h in self.households)

    def households_frame(self) -> pd.DataFrame:
        return pd.DataFrame(
            [(h.id, h.home_zone, round(h.income, 2), h.income_quintile, h.vehicles_owned, len(h.person_ids),
              int(h.joint_travel)) for h in self.households],
            columns=['household_id', 'home_zone', 'income', 'income_quintile', 'vehicles_owned', 'size',
                     'joint_travel'])

    def persons_frame(self) -> pd.DataFrame:
        return pd.DataFrame(
            [(p.id, p.household_id, p.gender.value, p.age, int(p.worker), int(p.student),
              -1 if p.work_zone is None else p.work_zone, -1 if p.school_zone is None else p.school_zone,
              int(p.has_vehicle)) for p in self.persons],
            columns=['person_id', 'household_id', 'gender', 'age', 'worker', 'student', 'work_zone',
                     'school_zone', 'has_vehicle'])

    @classmethod
    def from_frames(cls, households: pd.DataFrame, persons: pd.DataFrame) -> 'Population':
        members: Dict[int, List[int]] = {}
        plist = []
        for row in persons.itertuples(index=False):
            members.setdefault(int(row.household_id), []).append(int(row.person_id))
            plist.append(Person(
                id=int(row.person_id), household_id=int(row.household_id), gender=Gender(row.gender),
                age=int(row.age), worker=bool(row.worker), student=bool(row.student),
                work_zone=None if int(row.work_zone) < 0 else int(row.work_zone),
                school_zone=None if int(row.school_zone) < 0 else int(row.school_zone),
                has_vehicle=bool(row.has_vehicle)))
        hlist = [Household(id=int(r.household_id), home_zone=int(r.home_zone), income=float(r.income),
                           income_quintile=int(r.income_quintile), vehicles_owned=int(r.vehicles_owned),
                           person_ids=tuple(members.get(int(r.household_id), ())),
                           joint_travel=bool(r.joint_travel))
                 for r in households.itertuples(index=False)]
        return cls(hlist, plist)


def allocate_vehicles(household: Household, persons: Sequence[Person]) -> Tuple[int, ...]:
    """
    Ids of members given one of the household's vehicles: licensed members,
    workers first, then older first, then lower id.
    """
    licensed = [p for p in persons if p.licensed]
    licensed.sort(key=lambda p: (not p.worker, -p.age, p.id))
    return tuple(p.id for p in licensed[:max(household.vehicles_owned, 0)])


def reallocate(household: Household, persons: Sequence[Person]) -> List[Person]:
    drivers = set(allocate_vehicles(household, persons))
    return [replace(p, has_vehicle=p.id in drivers) for p in persons]


def car_available(person: Person, household: Household) -> bool:
    return person.has_vehicle or (household.joint_travel and household.vehicles_owned > 0)


def income_quintiles(incomes: np.ndarray) -> np.ndarray:
    """Quintile 1..5 from realized ranks; groups differ in size by at most one."""
    order = np.argsort(incomes, kind='stable')
    quintile = np.empty(len(incomes), dtype=int)
    for q, members in enumerate(np.array_split(order, 5), start=1):
        quintile[members] = q
    return quintile


class PopulationSynthesizer:
    """Draws a population from ``PopulationConfig`` marginals."""

    def __init__(self, config: PopulationConfig):
        self.config = config
        self.logger = logging.getLogger('demand.PopulationSynthesizer')

    def synthesize(self, seed: int) -> Population:
        c = self.config
        if c.households <= 0:
            raise ConfigError('population: household count must be positive')
        zones = {z: w for z, w in c.zone_weights.items() if w > 0}
        if not zones:
            raise ConfigError('population: no zones with positive weight')
        zones = normalized(dict(sorted(zones.items())))
        jobs = {z: w for z, w in c.job_weights.items() if w > 0}
        jobs = normalized(dict(sorted(jobs.items()))) if jobs else zones

        rng = substream(seed, 'population')
        n = c.households
        home = quota_sample(rng, n, zones)
        sizes = quota_sample(rng, n, normalized(c.household_size))
        owned = quota_sample(rng, n, normalized(c.vehicle_ownership))
        incomes = rng.lognormal(np.log(c.income_median), c.income_sigma, size=n)
        quintiles = income_quintiles(incomes)
        joint = rng.random(n) < c.joint_travel_rate

        n_persons = int(sum(sizes))
        genders = quota_sample(rng, n_persons, {Gender.FEMALE: c.female_share, Gender.MALE: 1 - c.female_share})
        other = max(1.0 - c.worker_rate - c.student_rate, 0.0)
        roles = quota_sample(rng, n_persons, {Role.WORKER: c.worker_rate, Role.STUDENT: c.student_rate,
                                              Role.OTHER: other})

        households: List[Household] = []
        persons: List[Person] = []
        pid = 1
        for h in range(n):
            hid = h + 1
            members = []
            for k in range(sizes[h]):
                role = roles[pid - 1]
                lo, hi = AGE_RANGES[role]
                if k == 0:
                    lo = max(lo, ADULT_AGE)
                    hi = max(hi, lo)
                age = int(rng.integers(lo, hi + 1))
                work_zone = weighted_choice(rng, jobs) if role == Role.WORKER else None
                school_zone = None
                if role == Role.STUDENT:
                    school_zone = home[h] if rng.random() < c.school_in_home_zone else weighted_choice(rng, zones)
                members.append(Person(id=pid, household_id=hid, gender=genders[pid - 1], age=age,
                                      worker=role == Role.WORKER, student=role == Role.STUDENT,
                                      work_zone=work_zone, school_zone=school_zone))
                pid += 1
            household = Household(id=hid, home_zone=int(home[h]), income=float(incomes[h]),
                                   income_quintile=int(quintiles[h]), vehicles_owned=int(owned[h]),
                                   person_ids=tuple(p.id for p in members), joint_travel=bool(joint[h]))
            households.append(household)
            persons.extend(reallocate(household, members))

        population = Population(households, persons)
        self.logger.info(f"Synthesized {len(households)} households, {len(persons)} persons, "
                         f"{population.total_vehicles} vehicles")
        return population


def synthesize_population(config: PopulationConfig, seed: int) -> Population:
    """
    Synthesize households and persons.

    Raises:
        ConfigError: zero households or zero zones
    """
    return PopulationSynthesizer(config).synthesize(seed)
