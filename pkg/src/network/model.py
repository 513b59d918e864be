"""
Network Model
=============

Immutable data types of the multimodal network.

Purpose:
--------
- Roadway nodes and links with per-class flow parameters
- Transit stops and schedule patterns parsed from GTFS
- Access (walk/drive) and transfer edges tying transit to the street layer
- JSON round-trip of the whole graph

Usage:
------
    from network.model import MultimodalGraph, load_graph, save_graph

    graph = load_graph('out/graph.baseline.json')
    for link in graph.out_links(node_id):
        ...

Key Features:
------------
- Frozen dataclasses validated on construction (NetworkError)
- Lazily built adjacency and stop/pattern indexes
- Bytewise-stable serialization (sorted keys, sorted ids)
"""

import json
import math
from dataclasses import dataclass, field, replace
from enum import Enum
from functools import cached_property
from pathlib import Path
from typing import Any, Dict, FrozenSet, List, Mapping, Optional, Tuple, Union

import numpy as np

from utils.errors import NetworkError

SCHEMA_VERSION = 1

ROAD_MODES = frozenset({'auto', 'bus', 'truck', 'walk', 'bike', 'rail'})


class VehicleClass(str, Enum):
    """Vehicle classes sharing the roadway."""
    CAR = 'car'
    BUS = 'bus'
    TRUCK = 'truck'


class TransitMode(str, Enum):
    """Transit service modes."""
    BUS = 'bus'
    METRO_RAIL = 'metro_rail'
    COMMUTER_RAIL = 'commuter_rail'


# multiplier on (free-flow speed, jam spacing) per class
DEFAULT_CLASS_FACTORS: Dict[str, Tuple[float, float]] = {
    VehicleClass.CAR.value: (1.0, 1.0),
    VehicleClass.TRUCK.value: (0.9, 2.0),
    VehicleClass.BUS.value: (0.85, 2.0),
}

# link mode token a vehicle class needs
CLASS_MODE = {
    VehicleClass.CAR: 'auto',
    VehicleClass.BUS: 'bus',
    VehicleClass.TRUCK: 'truck',
}


def node_place(node_id: int) -> str:
    return f"n:{node_id}"


def stop_place(stop_id: str) -> str:
    return f"s:{stop_id}"


@dataclass(frozen=True)
class Node:
    id: int
    x: float
    y: float
    zone_id: int

    def __post_init__(self):
        if not (math.isfinite(self.x) and math.isfinite(self.y)):
            raise NetworkError(f"Node {self.id} has non-finite coordinates")

    def distance_to(self, other: 'Node') -> float:
        return math.hypot(self.x - other.x, self.y - other.y)


@dataclass(frozen=True)
class Link:
    """
    Directed roadway link.

    ``class_factors`` maps vehicle class -> (free-flow multiplier, jam-spacing
    multiplier); missing classes use DEFAULT_CLASS_FACTORS.
    """
    id: int
    from_node: int
    to_node: int
    length: float
    lanes: int
    free_flow_speed: float
    jam_spacing: float
    wave_speed: float
    modes_allowed: FrozenSet[str]
    congestable: bool = True
    class_factors: Mapping[str, Tuple[float, float]] = field(default_factory=dict, hash=False)

    def __post_init__(self):
        if not self.length > 0:
            raise NetworkError(f"Link {self.id}: length must be > 0 (got {self.length})")
        if self.lanes < 1:
            raise NetworkError(f"Link {self.id}: lanes must be >= 1")
        if not self.free_flow_speed > 0:
            raise NetworkError(f"Link {self.id}: free_flow_speed must be > 0")
        if not self.jam_spacing > 0:
            raise NetworkError(f"Link {self.id}: jam_spacing must be > 0")
        if not self.wave_speed > 0:
            raise NetworkError(f"Link {self.id}: wave_speed must be > 0")
        unknown = set(self.modes_allowed) - ROAD_MODES
        if unknown:
            raise NetworkError(f"Link {self.id}: unknown modes {sorted(unknown)}")
        if 'rail' in self.modes_allowed and self.congestable:
            raise NetworkError(f"Link {self.id}: rail links must be non-congestable")

    def _factors(self, vehicle_class: Union[VehicleClass, str]) -> Tuple[float, float]:
        key = VehicleClass(vehicle_class).value
        if key in self.class_factors:
            return self.class_factors[key]
        return DEFAULT_CLASS_FACTORS[key]

    def class_free_flow_speed(self, vehicle_class: Union[VehicleClass, str] = VehicleClass.CAR) -> float:
        return self.free_flow_speed * self._factors(vehicle_class)[0]

    def class_jam_spacing(self, vehicle_class: Union[VehicleClass, str] = VehicleClass.CAR) -> float:
        return self.jam_spacing * self._factors(vehicle_class)[1]

    def free_flow_time(self, vehicle_class: Union[VehicleClass, str] = VehicleClass.CAR) -> float:
        return self.length / self.class_free_flow_speed(vehicle_class)

    def allows(self, mode: str) -> bool:
        return mode in self.modes_allowed


@dataclass(frozen=True)
class TransitStop:
    id: str
    name: str
    x: float
    y: float
    park_and_ride: bool = False
    node_id: Optional[int] = None
    accessible: bool = True


@dataclass(frozen=True)
class TransitPattern:
    """
    Trips of one route sharing an ordered stop sequence.

    ``arrivals[t][j]`` / ``departures[t][j]`` are seconds from midnight of trip
    ``t`` at stop index ``j``; trips are sorted by first departure.
    """
    id: str
    route_id: str
    mode: TransitMode
    agency: str
    stop_ids: Tuple[str, ...]
    trip_ids: Tuple[str, ...]
    arrivals: Tuple[Tuple[int, ...], ...]
    departures: Tuple[Tuple[int, ...], ...]
    seat_capacity: int
    crush_capacity: int

    def __post_init__(self):
        if len(self.stop_ids) < 2:
            raise NetworkError(f"Pattern {self.id}: needs at least two stops")
        if not (0 < self.seat_capacity <= self.crush_capacity):
            raise NetworkError(f"Pattern {self.id}: require 0 < seat <= crush capacity")
        if len(self.trip_ids) != len(self.arrivals) or len(self.arrivals) != len(self.departures):
            raise NetworkError(f"Pattern {self.id}: trip arrays disagree in length")
        n = len(self.stop_ids)
        for t, (arr, dep) in enumerate(zip(self.arrivals, self.departures)):
            if len(arr) != n or len(dep) != n:
                raise NetworkError(f"Pattern {self.id}: trip {self.trip_ids[t]} has wrong stop count")
            if not stop_times_increasing(arr, dep):
                raise NetworkError(f"Pattern {self.id}: trip {self.trip_ids[t]} times not increasing")
        firsts = [dep[0] for dep in self.departures]
        if firsts != sorted(firsts):
            raise NetworkError(f"Pattern {self.id}: trips not sorted by first departure")

    @property
    def n_trips(self) -> int:
        return len(self.trip_ids)

    @property
    def n_stops(self) -> int:
        return len(self.stop_ids)

    @cached_property
    def departure_columns(self) -> Tuple[Tuple[int, ...], ...]:
        """Departure times per stop index across trips."""
        return tuple(zip(*self.departures))

    @cached_property
    def is_fifo(self) -> bool:
        """True when no trip overtakes another at any stop."""
        for col in self.departure_columns:
            if any(b < a for a, b in zip(col, col[1:])):
                return False
        for col in zip(*self.arrivals):
            if any(b < a for a, b in zip(col, col[1:])):
                return False
        return True


def stop_times_increasing(arrivals, departures) -> bool:
    """arr[j] <= dep[j] < arr[j+1] along a trip."""
    for j in range(len(arrivals)):
        if departures[j] < arrivals[j]:
            return False
        if j + 1 < len(arrivals) and not arrivals[j + 1] > departures[j]:
            return False
    return True


@dataclass(frozen=True)
class AccessEdge:
    """
    Street-to-stop connector. Walk edges are usable in both directions;
    drive edges (park-and-ride) only from ``node_id`` to the stop.
    """
    stop_id: str
    node_id: int
    mode: str
    distance: float
    time: float


@dataclass(frozen=True)
class TransferEdge:
    from_stop: str
    to_stop: str
    distance: float
    time: float


@dataclass(frozen=True, eq=True)
class MultimodalGraph:
    """
    Layered roadway/walk/bike graph plus the schedule-based transit layer.

    Treated as immutable; scenario transforms return new instances.
    """
    nodes: Dict[int, Node]
    links: Dict[int, Link]
    stops: Dict[str, TransitStop] = field(default_factory=dict)
    patterns: Dict[str, TransitPattern] = field(default_factory=dict)
    access_edges: Tuple[AccessEdge, ...] = ()
    transfer_edges: Tuple[TransferEdge, ...] = ()
    walk_speed: float = 1.4
    bike_speed: float = 4.5

    __hash__ = None  # type: ignore[assignment]

    def __post_init__(self):
        object.__setattr__(self, 'access_edges', tuple(
            sorted(self.access_edges, key=lambda e: (e.stop_id, e.mode, e.node_id))))
        object.__setattr__(self, 'transfer_edges', tuple(
            sorted(self.transfer_edges, key=lambda e: (e.from_stop, e.to_stop))))
        for link in self.links.values():
            if link.from_node not in self.nodes or link.to_node not in self.nodes:
                raise NetworkError(f"Link {link.id} references an unknown node")
        for edge in self.access_edges:
            if edge.stop_id not in self.stops or edge.node_id not in self.nodes:
                raise NetworkError(f"Access edge {edge} references unknown endpoints")
        for edge in self.transfer_edges:
            if edge.from_stop not in self.stops or edge.to_stop not in self.stops:
                raise NetworkError(f"Transfer edge {edge} references unknown stops")
        for pattern in self.patterns.values():
            missing = [s for s in pattern.stop_ids if s not in self.stops]
            if missing:
                raise NetworkError(f"Pattern {pattern.id} references unknown stops {missing}")

    # --- indexes -------------------------------------------------------

    @cached_property
    def link_ids(self) -> Tuple[int, ...]:
        return tuple(sorted(self.links))

    @cached_property
    def link_index(self) -> Dict[int, int]:
        """Link id -> row in profile arrays."""
        return {lid: i for i, lid in enumerate(self.link_ids)}

    @cached_property
    def _out_links(self) -> Dict[int, Tuple[Link, ...]]:
        out: Dict[int, List[Link]] = {n: [] for n in self.nodes}
        for lid in self.link_ids:
            link = self.links[lid]
            out[link.from_node].append(link)
        return {n: tuple(v) for n, v in out.items()}

    def out_links(self, node_id: int) -> Tuple[Link, ...]:
        return self._out_links.get(node_id, ())

    @cached_property
    def stop_patterns(self) -> Dict[str, Tuple[Tuple[str, int], ...]]:
        """Stop id -> (pattern id, stop index) for every boardable occurrence."""
        index: Dict[str, List[Tuple[str, int]]] = {}
        for pid in sorted(self.patterns):
            pattern = self.patterns[pid]
            for j, sid in enumerate(pattern.stop_ids[:-1]):
                index.setdefault(sid, []).append((pid, j))
        return {k: tuple(v) for k, v in index.items()}

    @cached_property
    def access_by_node(self) -> Dict[int, Tuple[AccessEdge, ...]]:
        index: Dict[int, List[AccessEdge]] = {}
        for edge in self.access_edges:
            index.setdefault(edge.node_id, []).append(edge)
        return {k: tuple(v) for k, v in index.items()}

    @cached_property
    def access_by_stop(self) -> Dict[str, Tuple[AccessEdge, ...]]:
        index: Dict[str, List[AccessEdge]] = {}
        for edge in self.access_edges:
            index.setdefault(edge.stop_id, []).append(edge)
        return {k: tuple(v) for k, v in index.items()}

    @cached_property
    def transfers_from(self) -> Dict[str, Tuple[TransferEdge, ...]]:
        index: Dict[str, List[TransferEdge]] = {}
        for edge in self.transfer_edges:
            index.setdefault(edge.from_stop, []).append(edge)
        return {k: tuple(v) for k, v in index.items()}

    @cached_property
    def zone_ids(self) -> Tuple[int, ...]:
        return tuple(sorted({n.zone_id for n in self.nodes.values()}))

    @cached_property
    def zone_centroids(self) -> Dict[int, int]:
        """Zone -> node nearest the mean coordinate of the zone's nodes (ties by id)."""
        members: Dict[int, List[Node]] = {}
        for nid in sorted(self.nodes):
            node = self.nodes[nid]
            members.setdefault(node.zone_id, []).append(node)
        centroids = {}
        for zone, nodes in members.items():
            cx = float(np.mean([n.x for n in nodes]))
            cy = float(np.mean([n.y for n in nodes]))
            best = min(nodes, key=lambda n: (math.hypot(n.x - cx, n.y - cy), n.id))
            centroids[zone] = best.id
        return centroids

    @property
    def inaccessible_stops(self) -> Tuple[str, ...]:
        return tuple(sorted(s.id for s in self.stops.values() if not s.accessible))

    @property
    def has_transit(self) -> bool:
        return bool(self.patterns)

    def distance(self, a: int, b: int) -> float:
        return self.nodes[a].distance_to(self.nodes[b])

    def scheduled_trips(self) -> Dict[Tuple[str, str], int]:
        """Scheduled revenue trips by (agency, mode)."""
        counts: Dict[Tuple[str, str], int] = {}
        for pattern in self.patterns.values():
            key = (pattern.agency, pattern.mode.value)
            counts[key] = counts.get(key, 0) + pattern.n_trips
        return counts

    def replace(self, **changes) -> 'MultimodalGraph':
        return replace(self, **changes)

    # --- serialization -------------------------------------------------

    def to_dict(self) -> Dict[str, Any]:
        return {
            'schema_version': SCHEMA_VERSION,
            'walk_speed': self.walk_speed,
            'bike_speed': self.bike_speed,
            'nodes': [[n.id, n.x, n.y, n.zone_id] for n in (self.nodes[i] for i in sorted(self.nodes))],
            'links': [_link_to_dict(self.links[i]) for i in self.link_ids],
            'stops': [_stop_to_dict(self.stops[s]) for s in sorted(self.stops)],
            'patterns': [_pattern_to_dict(self.patterns[p]) for p in sorted(self.patterns)],
            'access_edges': [
                [e.stop_id, e.node_id, e.mode, e.distance, e.time]
                for e in sorted(self.access_edges, key=lambda e: (e.stop_id, e.mode, e.node_id))
            ],
            'transfer_edges': [
                [e.from_stop, e.to_stop, e.distance, e.time]
                for e in sorted(self.transfer_edges, key=lambda e: (e.from_stop, e.to_stop))
            ],
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> 'MultimodalGraph':
        if data.get('schema_version') != SCHEMA_VERSION:
            raise NetworkError(f"Unsupported graph schema version {data.get('schema_version')}")
        nodes = {int(r[0]): Node(int(r[0]), float(r[1]), float(r[2]), int(r[3])) for r in data['nodes']}
        links = {int(d['id']): _link_from_dict(d) for d in data['links']}
        stops = {d['id']: _stop_from_dict(d) for d in data['stops']}
        patterns = {d['id']: _pattern_from_dict(d) for d in data['patterns']}
        access = tuple(AccessEdge(r[0], int(r[1]), r[2], float(r[3]), float(r[4])) for r in data['access_edges'])
        transfers = tuple(TransferEdge(r[0], r[1], float(r[2]), float(r[3])) for r in data['transfer_edges'])
        return cls(nodes=nodes, links=links, stops=stops, patterns=patterns,
                   access_edges=access, transfer_edges=transfers,
                   walk_speed=float(data['walk_speed']), bike_speed=float(data['bike_speed']))


def _link_to_dict(link: Link) -> Dict[str, Any]:
    return {
        'id': link.id,
        'from': link.from_node,
        'to': link.to_node,
        'length_m': link.length,
        'lanes': link.lanes,
        'ffs_mps': link.free_flow_speed,
        'jam_spacing_m': link.jam_spacing,
        'wave_mps': link.wave_speed,
        'modes': sorted(link.modes_allowed),
        'congestable': link.congestable,
        'class_factors': {k: list(v) for k, v in sorted(link.class_factors.items())},
    }


def _link_from_dict(d: Dict[str, Any]) -> Link:
    return Link(
        id=int(d['id']), from_node=int(d['from']), to_node=int(d['to']),
        length=float(d['length_m']), lanes=int(d['lanes']), free_flow_speed=float(d['ffs_mps']),
        jam_spacing=float(d['jam_spacing_m']), wave_speed=float(d['wave_mps']),
        modes_allowed=frozenset(d['modes']), congestable=bool(d['congestable']),
        class_factors={k: (float(v[0]), float(v[1])) for k, v in d.get('class_factors', {}).items()},
    )


def _stop_to_dict(stop: TransitStop) -> Dict[str, Any]:
    return {'id': stop.id, 'name': stop.name, 'x': stop.x, 'y': stop.y,
            'park_and_ride': stop.park_and_ride, 'node_id': stop.node_id,
            'accessible': stop.accessible}


def _stop_from_dict(d: Dict[str, Any]) -> TransitStop:
    return TransitStop(id=d['id'], name=d['name'], x=float(d['x']), y=float(d['y']),
                       park_and_ride=bool(d['park_and_ride']),
                       node_id=None if d['node_id'] is None else int(d['node_id']),
                       accessible=bool(d['accessible']))


def _pattern_to_dict(p: TransitPattern) -> Dict[str, Any]:
    return {'id': p.id, 'route_id': p.route_id, 'mode': p.mode.value, 'agency': p.agency,
            'stop_ids': list(p.stop_ids), 'trip_ids': list(p.trip_ids),
            'arrivals': [list(a) for a in p.arrivals], 'departures': [list(d) for d in p.departures],
            'seat_capacity': p.seat_capacity, 'crush_capacity': p.crush_capacity}


def _pattern_from_dict(d: Dict[str, Any]) -> TransitPattern:
    return TransitPattern(
        id=d['id'], route_id=d['route_id'], mode=TransitMode(d['mode']), agency=d['agency'],
        stop_ids=tuple(d['stop_ids']), trip_ids=tuple(d['trip_ids']),
        arrivals=tuple(tuple(int(x) for x in a) for a in d['arrivals']),
        departures=tuple(tuple(int(x) for x in a) for a in d['departures']),
        seat_capacity=int(d['seat_capacity']), crush_capacity=int(d['crush_capacity']))


def save_graph(graph: MultimodalGraph, path: Union[str, Path], cfg_hash: Optional[str] = None) -> Path:
    """Write the graph as a single sorted-key JSON document."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    payload = graph.to_dict()
    if cfg_hash is not None:
        payload['config_hash'] = cfg_hash
    with open(path, 'w', encoding='utf-8', newline='\n') as f:
        json.dump(payload, f, sort_keys=True, separators=(',', ':'))
        f.write('\n')
    return path


def load_graph(path: Union[str, Path]) -> MultimodalGraph:
    with open(path, 'r', encoding='utf-8') as f:
        return MultimodalGraph.from_dict(json.load(f))
