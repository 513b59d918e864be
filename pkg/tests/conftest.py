"""
Test configuration and fixtures.

Small hand-built networks, GTFS feeds written to ``tmp_path`` and synthetic
populations shared by the package test modules.
"""

from pathlib import Path
from typing import Dict, List, Optional, Tuple

import pandas as pd
import pytest

from demand.population import PopulationConfig, synthesize_population
from network.model import AccessEdge, Link, MultimodalGraph, Node, TransitMode, TransitPattern, TransitStop
from network.toycity import ToyCityGenerator

ROAD = frozenset({'auto', 'bus', 'truck', 'walk', 'bike'})


def make_link(lid: int, a: int, b: int, length: float = 400.0, lanes: int = 1, ffs: float = 13.9,
              jam: float = 7.5, wave: float = 5.0, modes=ROAD, congestable: bool = True) -> Link:
    return Link(id=lid, from_node=a, to_node=b, length=length, lanes=lanes, free_flow_speed=ffs,
                jam_spacing=jam, wave_speed=wave, modes_allowed=frozenset(modes), congestable=congestable)


def grid_graph(size: int = 4, spacing: float = 400.0, zone_block: int = 2, **link_kwargs) -> MultimodalGraph:
    """``size`` x ``size`` grid with links in both directions; node id = row * size + col + 1."""
    nodes: Dict[int, Node] = {}
    per_row = (size + zone_block - 1) // zone_block
    for r in range(size):
        for c in range(size):
            nid = r * size + c + 1
            zone = (r // zone_block) * per_row + c // zone_block + 1
            nodes[nid] = Node(nid, c * spacing, r * spacing, zone)
    links: Dict[int, Link] = {}
    lid = 1
    for r in range(size):
        for c in range(size):
            a = r * size + c + 1
            for dr, dc in ((0, 1), (1, 0)):
                rr, cc = r + dr, c + dc
                if rr < size and cc < size:
                    b = rr * size + cc + 1
                    for u, v in ((a, b), (b, a)):
                        links[lid] = make_link(lid, u, v, length=spacing, **link_kwargs)
                        lid += 1
    return MultimodalGraph(nodes=nodes, links=links)


def corridor_graph(n_links: int = 3, length: float = 500.0, **link_kwargs) -> MultimodalGraph:
    """Straight one-way road 1 -> 2 -> ... -> n_links + 1, every node in zone 1."""
    nodes = {i: Node(i, (i - 1) * length, 0.0, 1) for i in range(1, n_links + 2)}
    links = {i: make_link(i, i, i + 1, length=length, **link_kwargs) for i in range(1, n_links + 1)}
    return MultimodalGraph(nodes=nodes, links=links)


def with_line(graph: MultimodalGraph, node_ids: List[int], headway: int = 600, first: int = 6 * 3600,
              last: int = 10 * 3600, run_time: int = 120, dwell: int = 0,
              mode: TransitMode = TransitMode.METRO_RAIL, agency: str = 'metro',
              seat: int = 100, crush: int = 150, pid: str = 'L:0',
              park_and_ride: Tuple[int, ...] = ()) -> MultimodalGraph:
    """Add a scheduled line stopping at the given nodes, with zero-length walk access."""
    stops = dict(graph.stops)
    access = list(graph.access_edges)
    stop_ids = []
    for nid in node_ids:
        sid = f"{pid.split(':')[0]}_{nid}"
        node = graph.nodes[nid]
        stops[sid] = TransitStop(sid, sid, node.x, node.y, park_and_ride=nid in park_and_ride, node_id=nid)
        access.append(AccessEdge(sid, nid, 'walk', 0.0, 0.0))
        if nid in park_and_ride:
            access.append(AccessEdge(sid, nid, 'drive', 0.0, 60.0))
        stop_ids.append(sid)
    trips, arrs, deps = [], [], []
    for k, start in enumerate(range(first, last + 1, headway)):
        arr, dep = [], []
        t = start
        for j in range(len(stop_ids)):
            arr.append(t)
            dep.append(t + dwell)
            t = t + dwell + run_time
        trips.append(f"{pid}_t{k}")
        arrs.append(tuple(arr))
        deps.append(tuple(dep))
    pattern = TransitPattern(id=pid, route_id=pid.split(':')[0], mode=mode, agency=agency,
                             stop_ids=tuple(stop_ids), trip_ids=tuple(trips), arrivals=tuple(arrs),
                             departures=tuple(deps), seat_capacity=seat, crush_capacity=crush)
    patterns = dict(graph.patterns)
    patterns[pid] = pattern
    return graph.replace(stops=stops, patterns=patterns, access_edges=tuple(access))


def write_roadway(directory: Path, graph: MultimodalGraph) -> Path:
    directory.mkdir(parents=True, exist_ok=True)
    pd.DataFrame([(n.id, n.x, n.y, n.zone_id) for n in graph.nodes.values()],
                 columns=['id', 'x', 'y', 'zone']).to_csv(directory / 'nodes.csv', index=False)
    pd.DataFrame([(l.id, l.from_node, l.to_node, l.length, l.lanes, l.free_flow_speed, l.jam_spacing,
                   l.wave_speed, '|'.join(sorted(l.modes_allowed)), int(l.congestable))
                  for l in graph.links.values()],
                 columns=['id', 'from', 'to', 'length_m', 'lanes', 'ffs_mps', 'jam_spacing_m', 'wave_mps',
                          'modes', 'congestable']).to_csv(directory / 'links.csv', index=False)
    return directory


def write_gtfs(directory: Path, files: Optional[Dict[str, str]] = None, skip: Tuple[str, ...] = ()) -> Path:
    """Minimal two-stop bus feed running Monday to Friday; ``files`` replaces file contents."""
    feed = {
        'stops.txt': "stop_id,stop_name,stop_x,stop_y,park_and_ride\n"
                     "A,Alpha,0,0,1\n"
                     "B,Beta,400,0,0\n"
                     "C,Gamma,800,0,0\n",
        'routes.txt': "route_id,agency_id,route_type\n"
                      "R1,cta,3\n"
                      "R2,metra,2\n",
        'trips.txt': "route_id,service_id,trip_id\n"
                     "R1,WK,t1\n"
                     "R1,WK,t2\n"
                     "R2,WK,t3\n"
                     "R1,SA,t4\n",
        'stop_times.txt': "trip_id,arrival_time,departure_time,stop_id,stop_sequence\n"
                          "t1,08:00:00,08:00:00,A,1\n"
                          "t1,08:02:00,08:02:30,B,2\n"
                          "t1,08:05:00,08:05:00,C,3\n"
                          "t2,08:10:00,08:10:00,A,1\n"
                          "t2,08:12:00,08:12:30,B,2\n"
                          "t2,08:15:00,08:15:00,C,3\n"
                          "t3,25:00:00,25:00:00,A,1\n"
                          "t3,25:04:00,25:04:00,C,2\n"
                          "t4,09:00:00,09:00:00,A,1\n"
                          "t4,09:05:00,09:05:00,C,2\n",
        'calendar.txt': "service_id,monday,tuesday,wednesday,thursday,friday,saturday,sunday,start_date,end_date\n"
                        "WK,1,1,1,1,1,0,0,20250101,20261231\n"
                        "SA,0,0,0,0,0,1,0,20250101,20261231\n",
    }
    feed.update(files or {})
    directory.mkdir(parents=True, exist_ok=True)
    for name, text in feed.items():
        if name not in skip:
            (directory / name).write_text(text, encoding='utf-8')
    return directory


@pytest.fixture
def grid():
    """4x4 grid, four zones of 2x2 nodes."""
    return grid_graph(4)


@pytest.fixture
def grid_with_metro():
    """4x4 grid with a metro line along the bottom row (nodes 1..4)."""
    return with_line(grid_graph(4), [1, 2, 3, 4], headway=300, run_time=40, park_and_ride=(1,))


@pytest.fixture
def gtfs_dir(tmp_path):
    return write_gtfs(tmp_path / 'gtfs')


@pytest.fixture
def small_population():
    config = PopulationConfig(households=60, zone_weights={1: 1.0, 2: 1.0, 3: 1.0, 4: 1.0})
    return synthesize_population(config, seed=11)


@pytest.fixture(scope='session')
def toy_city(tmp_path_factory):
    """A 9x9 toy city on disk (roadway, GTFS, zones)."""
    root = tmp_path_factory.mktemp('toy')
    return ToyCityGenerator(size=9).write(root)
