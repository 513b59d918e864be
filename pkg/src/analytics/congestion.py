"""
Congestion and mode-share KPIs from the link-time and trip records of a run.

Masks are zone-id lists: a link belongs to a mask by the zone of its upstream
node, a trip when both of its ends are inside.
"""

from dataclasses import dataclass
from typing import Dict, Iterable, List, Optional

import numpy as np
import pandas as pd

from network.model import MultimodalGraph
from router.plan import Mode
from router.profile import BIN_SECONDS, N_BINS

from .tables import percent_change

TRANSIT_MODES = (Mode.WALK_TO_TRANSIT.value, Mode.DRIVE_TO_TRANSIT.value)
ROAD_TRIP_MODES = (Mode.DRIVE.value,)


@dataclass(frozen=True)
class CongestionKpis:
    mean_speed_kmh: Optional[float]
    mean_travel_time_s: Optional[float]
    n_trips: int


def _link_frame(link_times: pd.DataFrame, graph: MultimodalGraph, mask: Optional[Iterable[int]]) -> pd.DataFrame:
    df = link_times[link_times['link_id'].isin(list(graph.links))]
    if mask is not None:
        zones = set(mask)
        keep = [lid for lid, link in graph.links.items() if graph.nodes[link.from_node].zone_id in zones]
        df = df[df['link_id'].isin(keep)]
    lengths = pd.Series({lid: link.length for lid, link in graph.links.items()})
    return df.assign(length=df['link_id'].map(lengths).astype(float))


def _trip_frame(trips: pd.DataFrame, graph: MultimodalGraph, mask: Optional[Iterable[int]]) -> pd.DataFrame:
    df = trips[(trips['status'] == 'arrived') & trips['mode'].isin(ROAD_TRIP_MODES)]
    if mask is not None:
        zones = set(mask)
        zone_of = {nid: node.zone_id for nid, node in graph.nodes.items()}
        inside = df['origin_node'].map(zone_of).isin(zones) & df['destination_node'].map(zone_of).isin(zones)
        df = df[inside]
    return df


def congestion_kpis(link_times: pd.DataFrame, trips: pd.DataFrame, graph: MultimodalGraph,
                    mask: Optional[Iterable[int]] = None) -> CongestionKpis:
    """
    Distance-weighted mean car speed and trip-weighted mean car travel time.

    An empty selection gives ``None`` for the affected KPI.
    """
    links = _link_frame(link_times, graph, mask)
    time = float((links['mean_time'] * links['count']).sum())
    distance = float((links['length'] * links['count']).sum())
    speed = distance / time * 3.6 if time > 0 else None
    selected = _trip_frame(trips, graph, mask)
    tt = float(selected['experienced'].astype(float).mean()) if len(selected) else None
    return CongestionKpis(speed, tt, int(len(selected)))


def congestion_deltas(baseline: CongestionKpis, scenario: CongestionKpis) -> Dict[str, Optional[float]]:
    def pct(b, s):
        return None if b is None or s is None else percent_change(b, s)
    return {
        'baseline_speed_kmh': baseline.mean_speed_kmh,
        'scenario_speed_kmh': scenario.mean_speed_kmh,
        'speed_pct': pct(baseline.mean_speed_kmh, scenario.mean_speed_kmh),
        'baseline_travel_time_s': baseline.mean_travel_time_s,
        'scenario_travel_time_s': scenario.mean_travel_time_s,
        'travel_time_pct': pct(baseline.mean_travel_time_s, scenario.mean_travel_time_s),
    }


def speed_profile(link_times: pd.DataFrame, graph: MultimodalGraph,
                  mask: Optional[Iterable[int]] = None) -> pd.DataFrame:
    """Distance-weighted mean car speed per 15-minute bin; bins with no traffic are NaN."""
    links = _link_frame(link_times, graph, mask)
    links = links.assign(distance=links['length'] * links['count'], time=links['mean_time'] * links['count'])
    grouped = links.groupby('bin')[['distance', 'time']].sum()
    speeds = np.full(N_BINS, np.nan)
    for b, row in grouped.iterrows():
        if row['time'] > 0:
            speeds[int(b)] = row['distance'] / row['time'] * 3.6
    return pd.DataFrame({'bin': np.arange(N_BINS), 'start_s': np.arange(N_BINS) * BIN_SECONDS,
                         'speed_kmh': np.round(speeds, 6)})


def vehicles_in_network_frame(baseline: Iterable[float], scenario: Iterable[float]) -> pd.DataFrame:
    """Mean number of road vehicles in the network per bin for both scenarios."""
    b, s = np.asarray(list(baseline), dtype=float), np.asarray(list(scenario), dtype=float)
    return pd.DataFrame({'bin': np.arange(len(b)), 'start_s': np.arange(len(b)) * BIN_SECONDS,
                         'baseline': np.round(b, 6), 'scenario': np.round(s, 6)})


def mode_share(trips: pd.DataFrame) -> Dict[str, float]:
    """
    Percent of arrived trips per final mode, plus the ``transit`` aggregate
    of walk-to-transit and drive-to-transit. Trucks are not person trips.
    """
    modes: List[str] = [m.value for m in Mode if m != Mode.TRUCK]
    done = trips[(trips['status'] == 'arrived') & trips['mode'].isin(modes)]
    n = len(done)
    counts = done['mode'].value_counts()
    shares = {m: (float(counts.get(m, 0)) / n * 100.0 if n else 0.0) for m in modes}
    shares['transit'] = sum(shares[m] for m in TRANSIT_MODES)
    return shares
