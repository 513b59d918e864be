"""
Traffic Model
=============

Mesoscopic multi-class traffic in Lagrangian coordinates. Each link holds one
ordered queue (a lane group); a vehicle's speed follows the speed-spacing
relationship of its class, with effective spacing = lanes x gap to leader.

Purpose:
--------
- Vectorized position update of every vehicle on the network per step
- Two-phase link transfer: heads reaching the link end propose a crossing at
  their exact arrival time; proposals are committed in (time, id) order
  against the downstream vacancy
- Gridlock release, deadlock detection, per-link conservation counters
- Experienced link times per (link, entry bin), vehicle-hours by class

Usage:
------
    from simcore.traffic import TrafficModel

    traffic = TrafficModel(graph, SimulationParams(dt=1.0))
    vid = traffic.insert('car', [12, 13, 14], t=28800.0)
    arrivals = traffic.step(28800.0)      # [(arrival_time, vid), ...]

Key Features:
------------
- Followers are clamped to keep gap >= jam spacing / lanes behind the
  leader's start-of-step position (no overtaking)
- Non-congestable links run at free-flow, FIFO, without spacing or vacancy
- Stable for dt <= jam_spacing / wave_speed (checked at construction)
"""

import logging
from collections import deque
from dataclasses import dataclass, field
from typing import Any, Callable, Deque, Dict, List, Optional, Sequence, Tuple

import numpy as np

from network.flow import speeds
from network.model import MultimodalGraph, VehicleClass
from router.profile import N_BINS, bin_of
from utils.errors import ConfigError, NetworkError, SimulationDeadlock

from .params import SimulationParams

CLASS_CODES = {VehicleClass.CAR: 0, VehicleClass.BUS: 1, VehicleClass.TRUCK: 2}
CLASSES = (VehicleClass.CAR, VehicleClass.BUS, VehicleClass.TRUCK)

# hook(vid, entry_time) -> (replacement links after the current one, their predicted entry times) or None
RerouteHook = Callable[[int, float], Optional[Tuple[List[int], List[float]]]]


@dataclass
class VehicleState:
    vid: int
    vehicle_class: VehicleClass
    route: List[int]
    depart: float
    owner: Any = None
    predicted_entry: Optional[List[float]] = None
    route_index: int = -1
    entered_at: float = 0.0
    blocked_since: Optional[float] = None
    reroutes: int = 0
    link_log: List[Tuple[int, float, float]] = field(default_factory=list)

    @property
    def link_id(self) -> Optional[int]:
        return self.route[self.route_index] if self.route_index >= 0 else None


def check_cfl(graph: MultimodalGraph, dt: float) -> None:
    """Raise ConfigError unless dt <= jam_spacing / wave_speed on every congestable link."""
    bound = min((l.jam_spacing / l.wave_speed for l in graph.links.values() if l.congestable), default=np.inf)
    if dt > bound + 1e-12:
        raise ConfigError(f"simulation.dt={dt} exceeds the stability bound {bound:.3f} s "
                          f"(jam_spacing / wave_speed)")


class TrafficModel:
    """
    Vehicle movement on congestable and non-congestable road links.
    """

    def __init__(self, graph: MultimodalGraph, params: Optional[SimulationParams] = None,
                 reroute_hook: Optional[RerouteHook] = None):
        self.graph = graph
        self.params = params or SimulationParams()
        self.dt = self.params.dt
        check_cfl(graph, self.dt)
        self.reroute_hook = reroute_hook
        self.logger = logging.getLogger('simcore.TrafficModel')

        self.link_ids = graph.link_ids
        self.index = graph.link_index
        links = [graph.links[l] for l in self.link_ids]
        n = len(links)
        self.length = np.array([l.length for l in links], dtype=float)
        self.lanes = np.array([l.lanes for l in links], dtype=float)
        self.wave = np.array([l.wave_speed for l in links], dtype=float)
        self.congestable = np.array([l.congestable for l in links], dtype=bool)
        self.ffs = np.array([[l.class_free_flow_speed(c) for c in CLASSES] for l in links], dtype=float).reshape(n, 3)
        self.jam = np.array([[l.class_jam_spacing(c) for c in CLASSES] for l in links], dtype=float).reshape(n, 3)

        self.queues: List[Deque[int]] = [deque() for _ in range(n)]
        self.vehicles: Dict[int, VehicleState] = {}
        self.buffer: Dict[int, float] = {}
        self._on_links: set = set()
        self._active_cache: Optional[np.ndarray] = None

        cap = 1024
        self.pos = np.zeros(cap)
        self.speed = np.zeros(cap)
        self.row = np.full(cap, -1, dtype=int)
        self.leader = np.full(cap, -1, dtype=int)
        self.cls = np.zeros(cap, dtype=int)
        self.avail = np.full(cap, np.inf)

        self.entered = np.zeros(n, dtype=np.int64)
        self.exited = np.zeros(n, dtype=np.int64)
        self.car_time_sum = np.zeros((n, N_BINS))
        self.car_time_count = np.zeros((n, N_BINS), dtype=np.int64)
        self.truck_time_sum = np.zeros((n, N_BINS))
        self.truck_time_count = np.zeros((n, N_BINS), dtype=np.int64)
        self.class_seconds = np.zeros(3)
        self.in_network_seconds = np.zeros(N_BINS)
        self.trajectories: List[Dict[str, Any]] = []
        self._next_trajectory = -np.inf
        self._last_progress: Optional[float] = None
        self.squeezes = 0

    # --- bookkeeping -----------------------------------------------------

    def _grow(self, vid: int) -> None:
        cap = len(self.pos)
        if vid < cap:
            return
        new = max(cap * 2, vid + 1)
        self.pos = np.concatenate([self.pos, np.zeros(new - cap)])
        self.speed = np.concatenate([self.speed, np.zeros(new - cap)])
        self.row = np.concatenate([self.row, np.full(new - cap, -1, dtype=int)])
        self.leader = np.concatenate([self.leader, np.full(new - cap, -1, dtype=int)])
        self.cls = np.concatenate([self.cls, np.zeros(new - cap, dtype=int)])
        self.avail = np.concatenate([self.avail, np.full(new - cap, np.inf)])

    def _active(self) -> np.ndarray:
        if self._active_cache is None:
            self._active_cache = np.array(sorted(self._on_links), dtype=int)
        return self._active_cache

    @property
    def n_in_network(self) -> int:
        return len(self._on_links) + len(self.buffer)

    @property
    def is_idle(self) -> bool:
        return not self._on_links and not self.buffer

    def _new_vehicle(self, vehicle_class, route: Sequence[int], t: float, owner: Any,
                     predicted_entry: Optional[Sequence[float]]) -> VehicleState:
        vehicle_class = VehicleClass(vehicle_class)
        for lid in route:
            if lid not in self.index:
                raise NetworkError(f"Route references unknown link {lid}")
        vid = len(self.vehicles)
        self._grow(vid)
        state = VehicleState(vid=vid, vehicle_class=vehicle_class, route=list(route), depart=float(t), owner=owner,
                             predicted_entry=list(predicted_entry) if predicted_entry is not None else None)
        self.vehicles[vid] = state
        self.cls[vid] = CLASS_CODES[vehicle_class]
        return state

    def insert(self, vehicle_class, route: Sequence[int], t: float, owner: Any = None,
               predicted_entry: Optional[Sequence[float]] = None) -> int:
        """Queue a vehicle to enter the first link of ``route`` at time ``t``."""
        if not route:
            raise NetworkError('cannot insert a vehicle with an empty route')
        state = self._new_vehicle(vehicle_class, route, t, owner, predicted_entry)
        self.buffer[state.vid] = float(t)
        return state.vid

    def place_vehicle(self, link_id: int, position: float, vehicle_class=VehicleClass.CAR,
                      route: Optional[Sequence[int]] = None, t: float = 0.0, owner: Any = None) -> int:
        """Put a vehicle directly on ``link_id`` behind the current tail (tests and warm starts)."""
        route = list(route) if route is not None else [link_id]
        if route[0] != link_id:
            raise NetworkError('route must start with the placement link')
        state = self._new_vehicle(vehicle_class, route, t, owner, None)
        r = self.index[link_id]
        if not 0 <= position <= self.length[r]:
            raise NetworkError(f"position {position} outside link {link_id}")
        q = self.queues[r]
        if q and self.pos[q[-1]] < position:
            raise NetworkError('placement would overtake the current tail')
        self._enter(state, r, t, position)
        return state.vid

    def _enter(self, state: VehicleState, r: int, te: float, position: float) -> None:
        vid = state.vid
        state.route_index += 1
        state.entered_at = te
        state.blocked_since = None
        q = self.queues[r]
        self.leader[vid] = q[-1] if q else -1
        q.append(vid)
        self.row[vid] = r
        self.pos[vid] = position
        self.speed[vid] = 0.0
        self.avail[vid] = np.inf
        if position >= self.length[r]:
            self.avail[vid] = te + self.length[r] / self.ffs[r, self.cls[vid]]
        self.entered[r] += 1
        self._on_links.add(vid)
        self._active_cache = None
        self._maybe_reroute(state, te)

    def _leave(self, state: VehicleState, te: float) -> None:
        vid = state.vid
        r = self.row[vid]
        q = self.queues[r]
        if not q or q[0] != vid:
            raise RuntimeError(f"vehicle {vid} is not the head of link {self.link_ids[r]}")
        q.popleft()
        if q:
            self.leader[q[0]] = -1
        self.exited[r] += 1
        elapsed = te - state.entered_at
        b = bin_of(state.entered_at)
        if state.vehicle_class == VehicleClass.CAR:
            self.car_time_sum[r, b] += elapsed
            self.car_time_count[r, b] += 1
        elif state.vehicle_class == VehicleClass.TRUCK:
            self.truck_time_sum[r, b] += elapsed
            self.truck_time_count[r, b] += 1
        state.link_log.append((self.link_ids[r], state.entered_at, te))

    def _maybe_reroute(self, state: VehicleState, te: float) -> None:
        if self.reroute_hook is None or state.predicted_entry is None:
            return
        idx = state.route_index
        if idx + 1 >= len(state.route):
            return
        predicted = state.predicted_entry[idx] - state.depart
        elapsed = te - state.depart
        p = self.params
        if elapsed >= p.reroute_factor * predicted and elapsed - predicted >= p.reroute_min_excess:
            result = self.reroute_hook(state.vid, te)
            if result is not None:
                links, entries = result
                state.route = state.route[:idx + 1] + list(links)
                state.predicted_entry = state.predicted_entry[:idx + 1] + list(entries)
                state.reroutes += 1

    # --- stepping --------------------------------------------------------

    def _vacancy(self, vid: int, r: int, te: float, t: float) -> Optional[float]:
        """Entry position on row ``r`` for ``vid`` crossing at ``te``, or None when full."""
        c = self.cls[vid]
        length = self.length[r]
        v = self.ffs[r, c]
        q = self.queues[r]
        if not q:
            room = length
        elif self.congestable[r]:
            room = self.pos[q[-1]] - self.jam[r, c] / self.lanes[r]
            if room < 0:
                return None
        else:
            room = self.pos[q[-1]]
        return float(min(v * (t + self.dt - te), room, length))

    def step(self, t: float) -> List[Tuple[float, int]]:
        """
        Advance [t, t + dt). Returns arrivals at route ends as (time, vid).

        Raises:
            SimulationDeadlock: nothing moved for ``deadlock_timeout`` with vehicles present
        """
        dt = self.dt
        proposals: List[Tuple[float, int]] = []
        moved = False
        active = self._active()
        if active.size:
            rows = self.row[active]
            cls = self.cls[active]
            x = self.pos[active].copy()
            ffs = self.ffs[rows, cls]
            jam = self.jam[rows, cls]
            lanes = self.lanes[rows]
            lead = self.leader[active]
            has_lead = lead >= 0
            lead_pos = np.where(has_lead, self.pos[np.maximum(lead, 0)], np.inf)
            cong = self.congestable[rows]
            follow = has_lead & cong
            spacing = np.where(follow, (lead_pos - x) * lanes, np.inf)
            v = np.where(follow, speeds(np.where(follow, spacing, jam * 2), ffs, jam, self.wave[rows]), ffs)
            new = x + v * dt
            limit = np.where(has_lead, np.where(cong, lead_pos - jam / lanes, lead_pos), np.inf)
            new = np.maximum(x, np.minimum(new, limit))
            length = self.length[rows]
            at_end = (~has_lead) & (new >= length)
            new = np.minimum(new, length)
            for i in np.flatnonzero(at_end):
                vid = int(active[i])
                if x[i] < length[i]:
                    te = t + (length[i] - x[i]) / v[i]
                    self.avail[vid] = te
                else:
                    te = max(t, self.avail[vid])
                proposals.append((float(te), vid))
            moved = bool(np.any(new > x))
            self.pos[active] = new
            self.speed[active] = (new - x) / dt

        due = [(te, vid) for vid, te in self.buffer.items() if te < t + dt]
        proposals.extend(due)

        arrivals: List[Tuple[float, int]] = []
        committed = 0
        for te, vid in sorted(proposals):
            state = self.vehicles[vid]
            on_link = state.route_index >= 0
            if on_link and state.route_index == len(state.route) - 1:
                self._leave(state, te)
                self._retire(state)
                arrivals.append((te, vid))
                committed += 1
                continue
            nxt = self.index[state.route[state.route_index + 1]]
            position = self._vacancy(vid, nxt, te, t)
            if position is None and on_link and state.blocked_since is not None \
                    and t - state.blocked_since >= self.params.stuck_time:
                tail = self.pos[self.queues[nxt][-1]]
                if tail > 0:
                    position = float(tail / 2.0)
                    self.squeezes += 1
                    self.logger.debug(f"Squeezed vehicle {vid} onto link {self.link_ids[nxt]} after "
                                      f"{t - state.blocked_since:.0f}s blocked")
            if position is None:
                if on_link and state.blocked_since is None:
                    state.blocked_since = t
                continue
            if on_link:
                self._leave(state, te)
            else:
                del self.buffer[vid]
            self._enter(state, nxt, te, position)
            committed += 1

        self._account(t, dt)
        if moved or committed:
            self._last_progress = t
        elif self._on_links or due:
            if self._last_progress is None:
                self._last_progress = t
            elif t - self._last_progress >= self.params.deadlock_timeout:
                raise SimulationDeadlock(
                    f"no vehicle moved for {t - self._last_progress:.0f}s at t={t:.0f}",
                    dump=self.diagnostic_dump(t))
        else:
            self._last_progress = None
        return arrivals

    def _retire(self, state: VehicleState) -> None:
        vid = state.vid
        self.row[vid] = -1
        self.leader[vid] = -1
        self._on_links.discard(vid)
        self._active_cache = None

    def _account(self, t: float, dt: float) -> None:
        active = self._active()
        if active.size:
            self.class_seconds += np.bincount(self.cls[active], minlength=3) * dt
        waiting = [vid for vid, te in self.buffer.items() if te < t + dt]
        if waiting:
            self.class_seconds += np.bincount(self.cls[waiting], minlength=3) * dt
        self.in_network_seconds[bin_of(t)] += (len(self._on_links) + len(waiting)) * dt
        if self.params.record_trajectories and t >= self._next_trajectory:
            self._next_trajectory = t + self.params.trajectory_interval
            for vid in active:
                state = self.vehicles[int(vid)]
                self.trajectories.append({
                    't': t, 'vehicle': int(vid), 'class': state.vehicle_class.value,
                    'link': self.link_ids[self.row[vid]], 'position': round(float(self.pos[vid]), 3),
                    'speed': round(float(self.speed[vid]), 3)})

    # --- checks ----------------------------------------------------------

    def check_order(self) -> bool:
        """Positions never increase from head to tail; strictly decrease on congestable links."""
        for r, q in enumerate(self.queues):
            ps = [self.pos[v] for v in q]
            for a, b in zip(ps, ps[1:]):
                if b > a or (self.congestable[r] and b == a):
                    return False
        return True

    def conservation(self) -> Dict[str, int]:
        present = sum(len(q) for q in self.queues)
        return {'entered': int(self.entered.sum()), 'exited': int(self.exited.sum()), 'present': present,
                'buffered': len(self.buffer)}

    def link_conserved(self) -> bool:
        return all(self.entered[r] - self.exited[r] == len(q) for r, q in enumerate(self.queues))

    def diagnostic_dump(self, t: float) -> Dict[str, Any]:
        blocked = sorted(self.link_ids[self.row[v]] for v, s in self.vehicles.items()
                         if s.blocked_since is not None and self.row[v] >= 0)
        return {'time': t, 'on_links': len(self._on_links), 'buffered': len(self.buffer),
                'blocked_links': blocked[:50]}

    def vehicle_hours(self, vehicle_class=VehicleClass.CAR) -> float:
        return float(self.class_seconds[CLASS_CODES[VehicleClass(vehicle_class)]] / 3600.0)
