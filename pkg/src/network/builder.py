"""
Graph Builder
=============

Assembles a MultimodalGraph from the roadway CSVs and parsed GTFS.

Purpose:
--------
- Read nodes.csv / links.csv (zero-length links rejected with a warning)
- Anchor each stop to its nearest walk node (scipy cKDTree)
- Walk access edges within max_access_walk, drive access for park-and-ride stops
- Transfer edges between stops within max_access_walk of each other
- Check walk-layer connectivity per zone (networkx)

Usage:
------
    from network.builder import GraphBuilder

    builder = GraphBuilder(params)
    graph = builder.build('data/network', feed.patterns, feed.stops)
    builder.diagnostics   # {'rejected_links': 0, 'inaccessible_stops': 1, ...}
"""

import logging
import math
from dataclasses import replace
from pathlib import Path
from typing import Any, Dict, Iterable, List, Optional, Sequence, Tuple, Union

import networkx as nx
import numpy as np
import pandas as pd
from scipy.spatial import cKDTree

from utils.errors import GtfsParseError, NetworkError

from .flow import scaled_wave_speed
from .model import (AccessEdge, Link, MultimodalGraph, Node, TransferEdge, TransitPattern,
                    TransitStop)
from .params import NetworkParams

NODE_COLUMNS = ('id', 'x', 'y', 'zone')
LINK_COLUMNS = ('id', 'from', 'to', 'length_m', 'lanes', 'ffs_mps', 'jam_spacing_m', 'wave_mps',
                'modes', 'congestable')
CLASS_FACTOR_COLUMNS = {
    'truck': ('ffs_factor_truck', 'jam_factor_truck'),
    'bus': ('ffs_factor_bus', 'jam_factor_bus'),
}


def parse_modes(value: str) -> frozenset:
    tokens = value.replace(';', '|').replace(' ', '|').split('|')
    return frozenset(t.strip() for t in tokens if t.strip())


def parse_bool(value: Any) -> bool:
    return str(value).strip().lower() in ('1', 'true', 'yes', 't')


class GraphBuilder:
    """
    Builds the multimodal graph; recoverable data problems are counted in
    ``diagnostics`` instead of raised.
    """

    def __init__(self, params: Optional[NetworkParams] = None):
        self.params = params or NetworkParams()
        self.logger = logging.getLogger('network.GraphBuilder')
        self.diagnostics: Dict[str, Any] = {}

    def read_roadway(self, roadway_dir: Union[str, Path]) -> Tuple[Dict[int, Node], Dict[int, Link]]:
        directory = Path(roadway_dir)
        frames = {}
        for name, cols in (('nodes.csv', NODE_COLUMNS), ('links.csv', LINK_COLUMNS)):
            path = directory / name
            if not path.exists():
                raise NetworkError(f"{name}: required file missing in {directory}")
            df = pd.read_csv(path, dtype=str, keep_default_na=False)
            df.columns = [c.strip() for c in df.columns]
            missing = [c for c in cols if c not in df.columns]
            if missing:
                raise NetworkError(f"{name}: missing columns {missing}")
            frames[name] = df

        nodes: Dict[int, Node] = {}
        for nid, x, y, zone in zip(*(frames['nodes.csv'][c] for c in NODE_COLUMNS)):
            node = Node(int(nid), float(x), float(y), int(zone))
            if node.id in nodes:
                raise NetworkError(f"Duplicate node id {node.id}")
            nodes[node.id] = node

        links: Dict[int, Link] = {}
        rejected = 0
        ldf = frames['links.csv']
        for row in ldf.to_dict('records'):
            length = float(row['length_m'])
            if length <= 0:
                rejected += 1
                self.logger.warning(f"Rejected link {row['id']}: zero length")
                continue
            factors = {k: tuple(v) for k, v in self.params.class_factors.items()}
            for cls_name, (fcol, jcol) in CLASS_FACTOR_COLUMNS.items():
                if row.get(fcol, '') != '' and row.get(jcol, '') != '':
                    factors[cls_name] = (float(row[fcol]), float(row[jcol]))
            link = Link(
                id=int(row['id']),
                from_node=int(row['from']),
                to_node=int(row['to']),
                length=length,
                lanes=int(row['lanes']),
                free_flow_speed=float(row['ffs_mps']),
                jam_spacing=float(row['jam_spacing_m']),
                wave_speed=float(row['wave_mps']),
                modes_allowed=parse_modes(row['modes']),
                congestable=parse_bool(row['congestable']),
                class_factors=factors,
            )
            if link.congestable and self.params.capacity_scale < 1:
                link = replace(link, wave_speed=scaled_wave_speed(link.wave_speed, link.free_flow_speed,
                                                                  self.params.capacity_scale))
            if link.id in links:
                raise NetworkError(f"Duplicate link id {link.id}")
            if link.from_node not in nodes or link.to_node not in nodes:
                raise NetworkError(f"Link {link.id} references an unknown node")
            links[link.id] = link
        self.diagnostics['rejected_links'] = rejected
        if self.params.capacity_scale < 1:
            self.logger.info(f"Link capacity scaled by {self.params.capacity_scale:g} (backward wave speed)")
        return nodes, links

    def _layer_nodes(self, nodes: Dict[int, Node], links: Dict[int, Link], mode: str) -> List[int]:
        ids = set()
        for link in links.values():
            if link.allows(mode):
                ids.add(link.from_node)
                ids.add(link.to_node)
        return sorted(ids) if ids else sorted(nodes)

    def anchor_stops(self, nodes: Dict[int, Node], links: Dict[int, Link],
                     stops: Sequence[TransitStop]) -> Tuple[Dict[str, TransitStop], List[AccessEdge]]:
        """Nearest-walk-node anchoring, walk access edges and park-and-ride drive edges."""
        p = self.params
        walk_ids = self._layer_nodes(nodes, links, 'walk')
        drive_ids = self._layer_nodes(nodes, links, 'auto')
        walk_tree = cKDTree(np.array([[nodes[i].x, nodes[i].y] for i in walk_ids]))
        drive_tree = cKDTree(np.array([[nodes[i].x, nodes[i].y] for i in drive_ids]))

        anchored: Dict[str, TransitStop] = {}
        edges: List[AccessEdge] = []
        inaccessible = 0
        for stop in sorted(stops, key=lambda s: s.id):
            dist, k = walk_tree.query([stop.x, stop.y])
            node_id = walk_ids[int(k)]
            accessible = bool(dist <= p.max_access_walk)
            if accessible:
                edges.append(AccessEdge(stop.id, node_id, 'walk', float(dist), float(dist) / p.walk_speed))
            else:
                inaccessible += 1
                self.logger.warning(f"Stop {stop.id} is {dist:.0f} m from the nearest walk node; "
                                    f"flagged inaccessible")
            if accessible and stop.park_and_ride:
                ddist, dk = drive_tree.query([stop.x, stop.y])
                if ddist <= p.max_access_walk:
                    edges.append(AccessEdge(stop.id, drive_ids[int(dk)], 'drive', float(ddist),
                                            p.park_time + float(ddist) / p.walk_speed))
            anchored[stop.id] = TransitStop(id=stop.id, name=stop.name, x=stop.x, y=stop.y,
                                            park_and_ride=stop.park_and_ride, node_id=node_id,
                                            accessible=accessible)
        self.diagnostics['inaccessible_stops'] = inaccessible
        return anchored, edges

    def transfer_edges(self, stops: Dict[str, TransitStop]) -> List[TransferEdge]:
        ids = sorted(stops)
        if len(ids) < 2:
            return []
        coords = np.array([[stops[s].x, stops[s].y] for s in ids])
        tree = cKDTree(coords)
        edges = []
        for i, j in sorted(tree.query_pairs(self.params.max_access_walk)):
            d = float(math.hypot(*(coords[i] - coords[j])))
            t = d / self.params.walk_speed
            edges.append(TransferEdge(ids[i], ids[j], d, t))
            edges.append(TransferEdge(ids[j], ids[i], d, t))
        return edges

    def check_walk_connectivity(self, nodes: Dict[int, Node], links: Dict[int, Link]) -> List[int]:
        """Zones whose walkable nodes fall in more than one connected component."""
        g = nx.Graph()
        for link in links.values():
            if link.allows('walk'):
                g.add_edge(link.from_node, link.to_node)
        by_zone: Dict[int, List[int]] = {}
        for nid in g.nodes:
            by_zone.setdefault(nodes[nid].zone_id, []).append(nid)
        broken = []
        for zone in sorted(by_zone):
            members = by_zone[zone]
            component = nx.node_connected_component(g, members[0])
            if any(m not in component for m in members[1:]):
                broken.append(zone)
        for zone in broken:
            self.logger.warning(f"Walk layer is disconnected inside zone {zone}")
        return broken

    def build(self, roadway_dir: Union[str, Path], patterns: Iterable[TransitPattern] = (),
              stops: Iterable[TransitStop] = ()) -> MultimodalGraph:
        nodes, links = self.read_roadway(roadway_dir)
        return self.assemble(nodes, links, patterns, stops)

    def assemble(self, nodes: Dict[int, Node], links: Dict[int, Link],
                 patterns: Iterable[TransitPattern] = (),
                 stops: Iterable[TransitStop] = ()) -> MultimodalGraph:
        if not nodes:
            raise NetworkError("Roadway has no nodes")
        patterns = list(patterns)
        stops = list(stops)
        known = {s.id for s in stops}
        for pattern in patterns:
            missing = [s for s in pattern.stop_ids if s not in known]
            if missing:
                raise GtfsParseError('stops.txt', f"pattern {pattern.id} references unknown stops {missing}")
        anchored, access = self.anchor_stops(nodes, links, stops) if stops else ({}, [])
        transfers = self.transfer_edges(anchored)
        self.diagnostics['disconnected_zones'] = self.check_walk_connectivity(nodes, links)
        self.diagnostics['rejected_links'] = self.diagnostics.get('rejected_links', 0)

        graph = MultimodalGraph(
            nodes=nodes,
            links=links,
            stops=anchored,
            patterns={p.id: p for p in patterns},
            access_edges=tuple(access),
            transfer_edges=tuple(transfers),
            walk_speed=self.params.walk_speed,
            bike_speed=self.params.bike_speed,
        )
        self.logger.info(f"Built graph: {len(nodes)} nodes, {len(links)} links, {len(anchored)} stops, "
                         f"{len(patterns)} patterns, {len(access)} access and {len(transfers)} transfer edges")
        return graph


def build_graph(roadway_dir: Union[str, Path], patterns: Iterable[TransitPattern] = (),
                stops: Iterable[TransitStop] = (), walk_speed: Optional[float] = None,
                max_access_walk: Optional[float] = None,
                params: Optional[NetworkParams] = None) -> MultimodalGraph:
    """Read the roadway CSVs in ``roadway_dir`` and attach the transit layer."""
    params = params or NetworkParams()
    updates = {}
    if walk_speed is not None:
        updates['walk_speed'] = walk_speed
    if max_access_walk is not None:
        updates['max_access_walk'] = max_access_walk
    if updates:
        params = NetworkParams.model_validate({**params.model_dump(), **updates})
    return GraphBuilder(params).build(roadway_dir, patterns, stops)
