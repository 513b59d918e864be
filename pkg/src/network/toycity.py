"""
Toy City Generator
==================

Deterministic grid city used by tests, examples and the ``toy-city`` verb.

Purpose:
--------
- Grid roadway (arterials every 4th row/column, local streets elsewhere)
- GTFS feed with bus lines on arterials, one metro line and one commuter-rail line
- Park-and-ride at rail terminals
- Zone layout in 4x4-node blocks and a central "city" mask
- Suburban homes, central jobs and a capacity scale for the sampled population

Usage:
------
    from network.toycity import ToyCityGenerator

    city = ToyCityGenerator(size=23).write('out/toy')
    city.network_dir, city.gtfs_dir, city.city_zones

Key Features:
------------
- 23x23 nodes, 400 m spacing -> 2,024 directed links by default
- Pure function of its arguments (no randomness)
"""

import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, List, Tuple, Union

import pandas as pd

SPACING = 400.0
ZONE_BLOCK = 4
SERVICE_ID = 'WK'
# real households per grid node the default toy city stands for
HOUSEHOLDS_PER_NODE = 250.0
MIN_CAPACITY_SCALE = 0.01


@dataclass
class ToyCity:
    """Files and metadata written by the generator."""
    root: Path
    network_dir: Path
    gtfs_dir: Path
    size: int
    zone_ids: List[int]
    city_zones: List[int]
    zone_weights: Dict[int, float] = field(default_factory=dict)
    job_weights: Dict[int, float] = field(default_factory=dict)
    attraction: Dict[int, float] = field(default_factory=dict)


def _fmt(seconds: int) -> str:
    return f"{seconds // 3600:02d}:{(seconds % 3600) // 60:02d}:{seconds % 60:02d}"


class ToyCityGenerator:
    """
    Writes nodes.csv/links.csv and a GTFS feed for an ``size`` x ``size`` grid.
    """

    def __init__(self, size: int = 23, spacing: float = SPACING, with_transit: bool = True):
        if size < 3:
            raise ValueError("toy city needs size >= 3")
        self.size = size
        self.spacing = spacing
        self.with_transit = with_transit
        self.logger = logging.getLogger('network.ToyCityGenerator')

    # --- roadway -------------------------------------------------------

    def node_id(self, row: int, col: int) -> int:
        return row * self.size + col + 1

    def zone_of(self, row: int, col: int) -> int:
        per_row = (self.size + ZONE_BLOCK - 1) // ZONE_BLOCK
        return (row // ZONE_BLOCK) * per_row + col // ZONE_BLOCK + 1

    def is_arterial_row(self, row: int) -> bool:
        return row % 4 == 0

    def nodes_frame(self) -> pd.DataFrame:
        rows = []
        for r in range(self.size):
            for c in range(self.size):
                rows.append((self.node_id(r, c), c * self.spacing, r * self.spacing, self.zone_of(r, c)))
        return pd.DataFrame(rows, columns=['id', 'x', 'y', 'zone'])

    def links_frame(self) -> pd.DataFrame:
        rows = []
        lid = 1

        def add(a: Tuple[int, int], b: Tuple[int, int], arterial: bool):
            nonlocal lid
            modes = 'auto|truck|walk|bike' + ('|bus' if arterial else '')
            lanes, ffs = (2, 16.0) if arterial else (1, 11.0)
            for (u, v) in ((a, b), (b, a)):
                rows.append((lid, self.node_id(*u), self.node_id(*v), self.spacing, lanes, ffs,
                             7.5, 6.67, modes, 1))
                lid += 1

        for r in range(self.size):
            for c in range(self.size - 1):
                add((r, c), (r, c + 1), self.is_arterial_row(r))
        for c in range(self.size):
            for r in range(self.size - 1):
                add((r, c), (r + 1, c), self.is_arterial_row(c))
        return pd.DataFrame(rows, columns=['id', 'from', 'to', 'length_m', 'lanes', 'ffs_mps',
                                           'jam_spacing_m', 'wave_mps', 'modes', 'congestable'])

    # --- transit -------------------------------------------------------

    def _lines(self) -> List[Dict]:
        """Line definitions: node sequences, mode, speed, headways."""
        n = self.size
        arterials = [i for i in range(n) if self.is_arterial_row(i)]
        picks = arterials[1::2] or arterials[:1]
        lines = []
        for r in picks:
            lines.append({'route_id': f"B{r}H", 'route_type': 3, 'agency': 'citybus',
                          'cells': [(r, c) for c in range(0, n, 2)], 'speed': 8.0,
                          'peak': 600, 'base': 900, 'pnr': ()})
        for c in picks:
            lines.append({'route_id': f"B{c}V", 'route_type': 3, 'agency': 'citybus',
                          'cells': [(r, c) for r in range(0, n, 2)], 'speed': 8.0,
                          'peak': 600, 'base': 900, 'pnr': ()})
        mid = n // 2
        metro = [(mid, c) for c in range(1, n - 1, 3)]
        lines.append({'route_id': 'M1', 'route_type': 1, 'agency': 'metro',
                      'cells': metro, 'speed': 12.0, 'peak': 300, 'base': 600,
                      'pnr': (0, len(metro) - 1)})
        rail = [(r, mid - 1) for r in range(0, n, 5)]
        if len(rail) >= 2:
            lines.append({'route_id': 'C1', 'route_type': 2, 'agency': 'commuter',
                          'cells': rail, 'speed': 18.0, 'peak': 1200, 'base': 1800,
                          'pnr': (0, len(rail) - 1)})
        return lines

    @staticmethod
    def _departures(peak: int, base: int) -> List[int]:
        times, t = [], 5 * 3600
        while t <= 23 * 3600 + 1800:
            times.append(t)
            in_peak = 6 * 3600 <= t < 9 * 3600 or 15 * 3600 <= t < 19 * 3600
            t += peak if in_peak else base
        return times

    def gtfs_frames(self) -> Dict[str, pd.DataFrame]:
        stops: Dict[str, Tuple] = {}
        routes, trips, stop_times = [], [], []
        for line in self._lines():
            rid = line['route_id']
            routes.append((rid, line['agency'], rid, line['route_type']))
            ids = []
            for k, (r, c) in enumerate(line['cells']):
                sid = f"{rid}_{k}"
                pnr = 1 if k in line['pnr'] else 0
                # stops sit 20 m off the node on the curb
                stops[sid] = (sid, f"{rid} stop {k}", c * self.spacing + 20.0, r * self.spacing + 20.0, pnr)
                ids.append(sid)
            seg = [int(round(self.spacing * (abs(a[0] - b[0]) + abs(a[1] - b[1])) / line['speed']))
                   for a, b in zip(line['cells'], line['cells'][1:])]
            for direction, seq in (('0', list(range(len(ids)))), ('1', list(range(len(ids)))[::-1])):
                run = seg if direction == '0' else seg[::-1]
                for t0 in self._departures(line['peak'], line['base']):
                    tid = f"{rid}_{direction}_{t0}"
                    trips.append((rid, SERVICE_ID, tid, direction))
                    t = t0
                    for pos, k in enumerate(seq):
                        stop_times.append((tid, _fmt(t), _fmt(t), ids[k], pos + 1))
                        if pos < len(run):
                            t += run[pos]
        return {
            'agency.txt': pd.DataFrame([('citybus', 'City Bus'), ('metro', 'Metro'), ('commuter', 'Commuter Rail')],
                                       columns=['agency_id', 'agency_name']),
            'stops.txt': pd.DataFrame(sorted(stops.values()),
                                      columns=['stop_id', 'stop_name', 'stop_x', 'stop_y', 'park_and_ride']),
            'routes.txt': pd.DataFrame(routes, columns=['route_id', 'agency_id', 'route_short_name', 'route_type']),
            'trips.txt': pd.DataFrame(trips, columns=['route_id', 'service_id', 'trip_id', 'direction_id']),
            'stop_times.txt': pd.DataFrame(stop_times, columns=['trip_id', 'arrival_time', 'departure_time',
                                                                'stop_id', 'stop_sequence']),
            'calendar.txt': pd.DataFrame([(SERVICE_ID, 1, 1, 1, 1, 1, 0, 0, '20250101', '20261231')],
                                         columns=['service_id', 'monday', 'tuesday', 'wednesday', 'thursday',
                                                  'friday', 'saturday', 'sunday', 'start_date', 'end_date']),
        }

    # --- zones ---------------------------------------------------------

    def zones(self) -> Tuple[List[int], List[int], Dict[int, float]]:
        """Zone ids, the central "city" zones and home weights (suburbs 1.5, centre 1.0)."""
        per_row = (self.size + ZONE_BLOCK - 1) // ZONE_BLOCK
        zone_ids = list(range(1, per_row * per_row + 1))
        lo, hi = per_row // 4, per_row - per_row // 4
        city = [z for z in zone_ids
                if lo <= (z - 1) // per_row < hi and lo <= (z - 1) % per_row < hi]
        weights = {z: (1.0 if z in city else 1.5) for z in zone_ids}
        return zone_ids, city, weights

    def job_weights(self, city: List[int], zone_ids: List[int]) -> Dict[int, float]:
        return {z: (4.0 if z in city else 1.0) for z in zone_ids}

    def attraction(self, city: List[int], zone_ids: List[int]) -> Dict[int, float]:
        return {z: (2.0 if z in city else 1.0) for z in zone_ids}

    def capacity_scale(self, households: int) -> float:
        """Simulated share of the city's traffic: ``households`` over HOUSEHOLDS_PER_NODE per node."""
        share = households / (HOUSEHOLDS_PER_NODE * self.size * self.size)
        return float(min(max(share, MIN_CAPACITY_SCALE), 1.0))

    def write(self, root: Union[str, Path]) -> ToyCity:
        root = Path(root)
        network_dir = root / 'network'
        gtfs_dir = root / 'gtfs'
        network_dir.mkdir(parents=True, exist_ok=True)
        self.nodes_frame().to_csv(network_dir / 'nodes.csv', index=False, lineterminator='\n')
        links = self.links_frame()
        links.to_csv(network_dir / 'links.csv', index=False, lineterminator='\n')
        if self.with_transit:
            gtfs_dir.mkdir(parents=True, exist_ok=True)
            for name, df in self.gtfs_frames().items():
                df.to_csv(gtfs_dir / name, index=False, lineterminator='\n')
        zone_ids, city, weights = self.zones()
        self.logger.info(f"Toy city written to {root}: {self.size}x{self.size} nodes, "
                         f"{len(links)} links, {len(zone_ids)} zones")
        return ToyCity(root=root, network_dir=network_dir, gtfs_dir=gtfs_dir, size=self.size,
                       zone_ids=zone_ids, city_zones=city, zone_weights=weights,
                       job_weights=self.job_weights(city, zone_ids), attraction=self.attraction(city, zone_ids))
