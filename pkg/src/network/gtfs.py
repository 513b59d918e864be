"""
GTFS Parser
===========

Reads the static GTFS subset the simulator needs and turns the trips active
on one service date into schedule patterns.

Purpose:
--------
- Resolve active services from calendar.txt and calendar_dates.txt
- Expand stop_times to seconds from midnight (hours may exceed 24)
- Reject trips with non-increasing times or dangling stop references
- Group trips by (route_id, ordered stop sequence)

Usage:
------
    from datetime import date
    from network.gtfs import parse_gtfs

    feed = parse_gtfs('data/gtfs', date(2025, 10, 7))
    feed.patterns, feed.stops, feed.rejected_trips

Key Features:
------------
- Files read with pandas as strings (no type guessing)
- Optional stop_x/stop_y planar columns, park_and_ride flag, agency_id
- Deterministic ordering of stops, patterns and trips
"""

import logging
from dataclasses import dataclass, field
from datetime import date
from pathlib import Path
from typing import Dict, List, Optional, Tuple, Union

import pandas as pd

from utils.errors import GtfsParseError

from .model import TransitMode, TransitPattern, TransitStop, stop_times_increasing
from .params import NetworkParams

REQUIRED_FILES = ('stops.txt', 'routes.txt', 'trips.txt', 'stop_times.txt', 'calendar.txt')

REQUIRED_COLUMNS = {
    'stops.txt': ('stop_id',),
    'routes.txt': ('route_id', 'route_type'),
    'trips.txt': ('route_id', 'service_id', 'trip_id'),
    'stop_times.txt': ('trip_id', 'arrival_time', 'departure_time', 'stop_id', 'stop_sequence'),
    'calendar.txt': ('service_id', 'monday', 'tuesday', 'wednesday', 'thursday', 'friday',
                     'saturday', 'sunday', 'start_date', 'end_date'),
    'calendar_dates.txt': ('service_id', 'date', 'exception_type'),
}

WEEKDAYS = ('monday', 'tuesday', 'wednesday', 'thursday', 'friday', 'saturday', 'sunday')

ROUTE_TYPE_MODES = {
    0: TransitMode.METRO_RAIL,   # tram / light rail
    1: TransitMode.METRO_RAIL,   # subway
    2: TransitMode.COMMUTER_RAIL,
    3: TransitMode.BUS,
    5: TransitMode.METRO_RAIL,   # cable tram
    7: TransitMode.METRO_RAIL,   # funicular
    11: TransitMode.BUS,         # trolleybus
    12: TransitMode.METRO_RAIL,  # monorail
}


@dataclass
class GtfsFeed:
    """Result of parsing one feed for one service date."""
    patterns: List[TransitPattern]
    stops: List[TransitStop]
    rejected_trips: List[Tuple[str, str]] = field(default_factory=list)

    @property
    def warning_count(self) -> int:
        return len(self.rejected_trips)

    @property
    def trip_count(self) -> int:
        return sum(p.n_trips for p in self.patterns)


def parse_time(value: str) -> Optional[int]:
    """'HH:MM:SS' (HH may be >= 24) -> seconds; blank -> None."""
    value = value.strip()
    if not value:
        return None
    parts = value.split(':')
    if len(parts) != 3:
        raise ValueError(f"bad GTFS time '{value}'")
    h, m, s = (int(p) for p in parts)
    return h * 3600 + m * 60 + s


class GtfsParser:
    """
    Parser for a GTFS static feed directory.

    Rejected trips are logged at WARNING and listed in ``GtfsFeed.rejected_trips``.
    """

    def __init__(self, params: Optional[NetworkParams] = None):
        self.params = params or NetworkParams()
        self.logger = logging.getLogger('network.GtfsParser')

    def _read(self, directory: Path, name: str, required: bool = True) -> Optional[pd.DataFrame]:
        path = directory / name
        if not path.exists():
            if required:
                raise GtfsParseError(name)
            return None
        try:
            df = pd.read_csv(path, dtype=str, keep_default_na=False, encoding='utf-8-sig')
        except (pd.errors.ParserError, UnicodeDecodeError, pd.errors.EmptyDataError) as e:
            raise GtfsParseError(name, f"unreadable: {e}") from e
        df.columns = [c.strip() for c in df.columns]
        missing = [c for c in REQUIRED_COLUMNS.get(name, ()) if c not in df.columns]
        if missing:
            raise GtfsParseError(name, f"missing columns {missing}")
        return df

    def active_services(self, calendar: pd.DataFrame, calendar_dates: Optional[pd.DataFrame],
                        service_date: date) -> set:
        day = service_date.strftime('%Y%m%d')
        weekday = WEEKDAYS[service_date.weekday()]
        in_range = (calendar['start_date'].str.strip() <= day) & (day <= calendar['end_date'].str.strip())
        runs = calendar[weekday].str.strip() == '1'
        active = set(calendar.loc[in_range & runs, 'service_id'].str.strip())
        if calendar_dates is not None:
            on_day = calendar_dates[calendar_dates['date'].str.strip() == day]
            for sid, exc in zip(on_day['service_id'].str.strip(), on_day['exception_type'].str.strip()):
                if exc == '1':
                    active.add(sid)
                elif exc == '2':
                    active.discard(sid)
        return active

    def _stops(self, df: pd.DataFrame) -> Dict[str, TransitStop]:
        if 'stop_x' in df.columns and 'stop_y' in df.columns:
            xs, ys = df['stop_x'], df['stop_y']
        elif 'stop_lon' in df.columns and 'stop_lat' in df.columns:
            xs, ys = df['stop_lon'], df['stop_lat']
        else:
            raise GtfsParseError('stops.txt', 'missing coordinate columns (stop_x/stop_y or stop_lon/stop_lat)')
        names = df['stop_name'] if 'stop_name' in df.columns else df['stop_id']
        pnr = df['park_and_ride'] if 'park_and_ride' in df.columns else pd.Series([''] * len(df))
        loc_type = df['location_type'] if 'location_type' in df.columns else pd.Series([''] * len(df))
        stops = {}
        for sid, name, x, y, p, lt in zip(df['stop_id'], names, xs, ys, pnr, loc_type):
            if lt.strip() not in ('', '0'):
                continue
            sid = sid.strip()
            try:
                stops[sid] = TransitStop(id=sid, name=name.strip(), x=float(x), y=float(y),
                                         park_and_ride=p.strip() in ('1', 'true', 'True'))
            except ValueError as e:
                raise GtfsParseError('stops.txt', f"bad coordinates for stop {sid}") from e
        return stops

    def parse(self, feed_directory: Union[str, Path], service_date: Optional[date] = None) -> GtfsFeed:
        """
        Parse ``feed_directory`` for ``service_date`` (defaults to params.service_date).

        Raises:
            GtfsParseError: a required file or column is missing
        """
        directory = Path(feed_directory)
        service_date = service_date or self.params.service_date
        tables = {name: self._read(directory, name) for name in REQUIRED_FILES}
        calendar_dates = self._read(directory, 'calendar_dates.txt', required=False)

        stops = self._stops(tables['stops.txt'])
        active = self.active_services(tables['calendar.txt'], calendar_dates, service_date)

        routes = tables['routes.txt']
        route_info: Dict[str, Tuple[TransitMode, str]] = {}
        for rid, rtype, agency in zip(routes['route_id'].str.strip(), routes['route_type'].str.strip(),
                                      routes['agency_id'] if 'agency_id' in routes.columns
                                      else [''] * len(routes)):
            try:
                mode = ROUTE_TYPE_MODES.get(int(rtype))
            except ValueError:
                mode = None
            if mode is None:
                self.logger.warning(f"Route {rid}: unsupported route_type '{rtype}', treated as bus")
                mode = TransitMode.BUS
            route_info[rid] = (mode, agency.strip() or 'default')

        trips = tables['trips.txt'].copy()
        trips['trip_id'] = trips['trip_id'].str.strip()
        trips['route_id'] = trips['route_id'].str.strip()
        trips = trips[trips['service_id'].str.strip().isin(active) & trips['route_id'].isin(route_info)]
        trip_route = dict(zip(trips['trip_id'], trips['route_id']))

        st = tables['stop_times.txt']
        st = st[st['trip_id'].str.strip().isin(trip_route)].copy()
        st['trip_id'] = st['trip_id'].str.strip()
        st['stop_id'] = st['stop_id'].str.strip()
        st['seq'] = pd.to_numeric(st['stop_sequence'], errors='coerce')
        if st['seq'].isna().any():
            raise GtfsParseError('stop_times.txt', 'non-integer stop_sequence')
        st = st.sort_values(['trip_id', 'seq'], kind='mergesort')

        rejected: List[Tuple[str, str]] = []
        groups: Dict[Tuple[str, Tuple[str, ...]], List[Tuple[int, str, Tuple[int, ...], Tuple[int, ...]]]] = {}

        for trip_id, g in st.groupby('trip_id', sort=True):
            stop_ids = tuple(g['stop_id'])
            if len(stop_ids) < 2:
                rejected.append((trip_id, 'fewer than two stops'))
                continue
            dangling = [s for s in stop_ids if s not in stops]
            if dangling:
                rejected.append((trip_id, f"dangling stop reference {dangling[0]}"))
                continue
            try:
                arr = [parse_time(v) for v in g['arrival_time']]
                dep = [parse_time(v) for v in g['departure_time']]
            except ValueError as e:
                rejected.append((trip_id, str(e)))
                continue
            arr = [a if a is not None else d for a, d in zip(arr, dep)]
            dep = [d if d is not None else a for a, d in zip(arr, dep)]
            if any(v is None for v in arr):
                rejected.append((trip_id, 'missing stop time'))
                continue
            if not stop_times_increasing(arr, dep):
                rejected.append((trip_id, 'stop times not strictly increasing'))
                continue
            key = (trip_route[trip_id], stop_ids)
            groups.setdefault(key, []).append((dep[0], trip_id, tuple(arr), tuple(dep)))

        for trip_id, reason in rejected:
            self.logger.warning(f"Rejected trip {trip_id}: {reason}")

        patterns: List[TransitPattern] = []
        per_route: Dict[str, int] = {}
        for (route_id, stop_ids) in sorted(groups):
            members = sorted(groups[(route_id, stop_ids)])
            mode, agency = route_info[route_id]
            cap = self.params.transit_capacity[mode]
            k = per_route.get(route_id, 0)
            per_route[route_id] = k + 1
            patterns.append(TransitPattern(
                id=f"{route_id}:{k}",
                route_id=route_id,
                mode=mode,
                agency=agency,
                stop_ids=stop_ids,
                trip_ids=tuple(m[1] for m in members),
                arrivals=tuple(m[2] for m in members),
                departures=tuple(m[3] for m in members),
                seat_capacity=cap.seat,
                crush_capacity=cap.crush,
            ))

        self.logger.info(f"Parsed {len(patterns)} patterns, "
                         f"{sum(p.n_trips for p in patterns)} trips, {len(stops)} stops "
                         f"({len(rejected)} trips rejected) for {service_date.isoformat()}")
        return GtfsFeed(patterns=patterns, stops=[stops[s] for s in sorted(stops)], rejected_trips=rejected)


def parse_gtfs(feed_directory: Union[str, Path], service_date: date,
               params: Optional[NetworkParams] = None) -> GtfsFeed:
    """Parse a GTFS feed for one service date."""
    return GtfsParser(params).parse(feed_directory, service_date)
