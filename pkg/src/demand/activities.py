"""
Activity Generation
===================

Daily activity lists per person: mandatory work/school activities plus
Poisson counts of flexible activities, each with a start drawn from a
30-minute start histogram and a lognormal duration.

Usage:
------
    from demand.activities import ActivityParams, generate_activities

    acts = generate_activities(person, ActivityParams(), seed=7, home_zone=3)
"""

import math
from dataclasses import dataclass
from enum import Enum
from typing import Dict, List, Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator
from scipy.stats import norm

from utils.rng import substream

from .population import Person

START_BINS = 48
START_BIN_SECONDS = 1800
ACTIVITY_ID_STRIDE = 1000


class ActivityType(str, Enum):
    EAT_OUT = 'eat_out'
    ERRANDS = 'errands'
    EV_CHARGING = 'ev_charging'
    HEALTHCARE = 'healthcare'
    LEISURE = 'leisure'
    PART_TIME_WORK = 'part_time_work'
    PERSONAL = 'personal'
    PICKUP_DROPOFF = 'pickup_dropoff'
    RELIGIOUS_CIVIC = 'religious_civic'
    SCHOOL = 'school'
    SERVICE = 'service'
    SHOP_MAJOR = 'shop_major'
    SHOP_OTHER = 'shop_other'
    SOCIAL = 'social'
    WORK = 'work'
    WORK_AT_HOME = 'work_at_home'

    @property
    def is_mandatory(self) -> bool:
        return self in MANDATORY_TYPES

    @property
    def is_care(self) -> bool:
        return self in CARE_TYPES


MANDATORY_TYPES = frozenset({ActivityType.WORK, ActivityType.SCHOOL, ActivityType.PART_TIME_WORK})
CARE_TYPES = frozenset({ActivityType.ERRANDS, ActivityType.HEALTHCARE, ActivityType.PICKUP_DROPOFF,
                        ActivityType.SCHOOL, ActivityType.SHOP_MAJOR})
# reporting group; every other type counts as non-work
WORK_SCHOOL_TYPES = frozenset({ActivityType.WORK, ActivityType.SCHOOL, ActivityType.PART_TIME_WORK,
                               ActivityType.WORK_AT_HOME})
FLEXIBLE_TYPES = tuple(t for t in ActivityType
                       if t not in MANDATORY_TYPES and t != ActivityType.WORK_AT_HOME)


class Flexibility(str, Enum):
    MANDATORY = 'mandatory'
    FLEXIBLE = 'flexible'


@dataclass(frozen=True)
class Activity:
    id: int
    person_id: int
    type: ActivityType
    planned_start: float
    planned_duration: float
    min_duration: float
    latest_end: float
    location_zone: Optional[int] = None

    @property
    def flexibility(self) -> Flexibility:
        return Flexibility.MANDATORY if self.type.is_mandatory else Flexibility.FLEXIBLE

    @property
    def is_mandatory(self) -> bool:
        return self.type.is_mandatory

    @property
    def is_care(self) -> bool:
        return self.type.is_care

    @property
    def planned_end(self) -> float:
        return self.planned_start + self.planned_duration


class TypeTiming(BaseModel):
    """Start-time histogram (or Gaussian over hours) and lognormal duration."""
    model_config = ConfigDict(extra='forbid')

    start_mean_hour: float = Field(default=12.0, ge=0, le=24)
    start_sd_hour: float = Field(default=3.0, gt=0)
    start_histogram: Optional[List[float]] = None
    duration_median: float = Field(default=3600.0, gt=0, description='seconds')
    duration_sigma: float = Field(default=0.4, ge=0)
    slack: float = Field(default=3600.0, ge=0, description='seconds between planned end and latest end')
    min_fraction: float = Field(default=0.5, gt=0, le=1)

    @field_validator('start_histogram')
    @classmethod
    def _check_histogram(cls, v):
        if v is None:
            return v
        if len(v) != START_BINS or any(w < 0 for w in v) or sum(v) <= 0:
            raise ValueError(f"start_histogram needs {START_BINS} non-negative weights with positive sum")
        return v

    def start_weights(self) -> np.ndarray:
        if self.start_histogram is not None:
            w = np.asarray(self.start_histogram, dtype=float)
        else:
            centers = (np.arange(START_BINS) + 0.5) * 0.5
            w = norm.pdf(centers, self.start_mean_hour, self.start_sd_hour)
        return w / w.sum()


def _t(mean: float, sd: float, minutes: float, sigma: float = 0.4, slack_min: float = 60.0,
       frac: float = 0.5) -> TypeTiming:
    return TypeTiming(start_mean_hour=mean, start_sd_hour=sd, duration_median=minutes * 60.0,
                      duration_sigma=sigma, slack=slack_min * 60.0, min_fraction=frac)


def default_timing() -> Dict[ActivityType, TypeTiming]:
    A = ActivityType
    return {
        A.WORK: _t(8.0, 1.0, 510, 0.2, 30, 0.75),
        A.WORK_AT_HOME: _t(8.5, 1.5, 480, 0.2, 30, 0.75),
        A.SCHOOL: _t(8.0, 0.5, 390, 0.1, 30, 0.75),
        A.PART_TIME_WORK: _t(10.0, 2.5, 270, 0.3, 30, 0.75),
        A.EAT_OUT: _t(12.5, 3.0, 60),
        A.ERRANDS: _t(13.0, 3.0, 30),
        A.EV_CHARGING: _t(14.0, 4.0, 45),
        A.HEALTHCARE: _t(11.0, 2.5, 60),
        A.LEISURE: _t(16.0, 3.5, 120),
        A.PERSONAL: _t(13.0, 3.5, 45),
        A.PICKUP_DROPOFF: _t(11.0, 4.0, 10, 0.3, 30),
        A.RELIGIOUS_CIVIC: _t(14.0, 4.0, 90),
        A.SERVICE: _t(13.0, 3.0, 40),
        A.SHOP_MAJOR: _t(14.0, 3.0, 60),
        A.SHOP_OTHER: _t(14.0, 3.5, 30),
        A.SOCIAL: _t(17.0, 3.0, 120),
    }


def default_rates() -> Dict[ActivityType, float]:
    """Flexible activities per person per day (regional daily counts over 10 M persons)."""
    A = ActivityType
    return {
        A.EAT_OUT: 0.215,
        A.ERRANDS: 0.128,
        A.EV_CHARGING: 0.00003,
        A.HEALTHCARE: 0.08937,
        A.LEISURE: 0.167,
        A.PERSONAL: 0.03274,
        A.PICKUP_DROPOFF: 0.230,
        A.RELIGIOUS_CIVIC: 0.03861,
        A.SERVICE: 0.05093,
        A.SHOP_MAJOR: 0.06665,
        A.SHOP_OTHER: 0.279,
        A.SOCIAL: 0.118,
    }


class ActivityParams(BaseModel):
    model_config = ConfigDict(extra='forbid')

    rates: Dict[ActivityType, float] = Field(default_factory=default_rates)
    part_time_rate: float = Field(default=0.21718, ge=0, le=1)
    work_at_home_share: float = Field(default=0.1694, ge=0, le=1)
    timing: Dict[ActivityType, TypeTiming] = Field(default_factory=default_timing)
    min_duration_floor: float = Field(default=300.0, ge=0)
    return_home_gap: float = Field(default=7200.0, ge=0)

    @field_validator('rates')
    @classmethod
    def _check_rates(cls, v):
        for t, rate in v.items():
            if rate < 0:
                raise ValueError(f"rate for {t.value} must be >= 0")
            if t.is_mandatory or t == ActivityType.WORK_AT_HOME:
                raise ValueError(f"{t.value} is not drawn from a flexible rate")
        return v

    @field_validator('timing')
    @classmethod
    def _fill_timing(cls, v):
        return {**default_timing(), **v}


def draw_activity(rng: np.random.Generator, activity_id: int, person_id: int, kind: ActivityType,
                  params: ActivityParams, zone: Optional[int]) -> Activity:
    timing = params.timing[kind]
    b = int(rng.choice(START_BINS, p=timing.start_weights()))
    start = float(round((b + rng.random()) * START_BIN_SECONDS))
    duration = float(max(60, round(rng.lognormal(math.log(timing.duration_median), timing.duration_sigma))))
    min_duration = min(duration, max(params.min_duration_floor, timing.min_fraction * duration))
    return Activity(id=activity_id, person_id=person_id, type=kind, planned_start=start,
                    planned_duration=duration, min_duration=float(min_duration),
                    latest_end=start + duration + timing.slack, location_zone=zone)


def generate_activities(person: Person, params: ActivityParams, seed: int,
                        home_zone: Optional[int] = None) -> List[Activity]:
    """
    One person's unresolved activity list, ordered by (planned_start, id).

    Workers get one work or work-at-home activity, students one school
    activity; other adults a part-time work activity with ``part_time_rate``.
    Flexible activities have no location until destination choice.
    """
    rng = substream(seed, 'activities', person.id)
    kinds: List[tuple] = []
    if person.worker:
        if rng.random() < params.work_at_home_share:
            kinds.append((ActivityType.WORK_AT_HOME, home_zone))
        else:
            kinds.append((ActivityType.WORK, person.work_zone if person.work_zone is not None else home_zone))
    elif person.student:
        kinds.append((ActivityType.SCHOOL, person.school_zone if person.school_zone is not None else home_zone))
    elif person.age >= 18 and rng.random() < params.part_time_rate:
        kinds.append((ActivityType.PART_TIME_WORK, person.work_zone if person.work_zone is not None else home_zone))
    for kind in FLEXIBLE_TYPES:
        rate = params.rates.get(kind, 0.0)
        if rate > 0:
            kinds.extend((kind, None) for _ in range(int(rng.poisson(rate))))

    base = person.id * ACTIVITY_ID_STRIDE
    activities = [draw_activity(rng, base + k, person.id, kind, params, zone)
                  for k, (kind, zone) in enumerate(kinds)]
    return sorted(activities, key=lambda a: (a.planned_start, a.id))
