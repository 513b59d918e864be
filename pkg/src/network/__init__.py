"""
Network Package
===============

Multimodal network: roadway graph with per-class flow parameters, walk and
bike layers, and the schedule-based transit layer parsed from GTFS.

Modules:
-------
- model.py: Node, Link, TransitStop, TransitPattern, MultimodalGraph
- flow.py: speed-spacing relationship
- gtfs.py: GTFS static parser
- builder.py: graph assembly from roadway CSVs and GTFS
- toycity.py: deterministic grid city generator

Usage:
------
    from network import parse_gtfs, build_graph, link_speed

    feed = parse_gtfs('data/gtfs', date(2025, 10, 7))
    graph = build_graph('data/network', feed.patterns, feed.stops)
"""

from .builder import GraphBuilder, build_graph
from .flow import link_speed
from .gtfs import GtfsFeed, GtfsParser, parse_gtfs
from .model import (AccessEdge, Link, MultimodalGraph, Node, TransferEdge, TransitMode,
                    TransitPattern, TransitStop, VehicleClass, load_graph, save_graph)
from .params import NetworkParams, VehicleCapacity
from .toycity import ToyCity, ToyCityGenerator

__all__ = [
    'AccessEdge',
    'GraphBuilder',
    'GtfsFeed',
    'GtfsParser',
    'Link',
    'MultimodalGraph',
    'NetworkParams',
    'Node',
    'ToyCity',
    'ToyCityGenerator',
    'TransferEdge',
    'TransitMode',
    'TransitPattern',
    'TransitStop',
    'VehicleCapacity',
    'VehicleClass',
    'build_graph',
    'link_speed',
    'load_graph',
    'parse_gtfs',
    'save_graph',
]
