"""
Speed-spacing relationship (triangular fundamental diagram in spacing form).

    v(s) = clip(min(v_f, w * (s - s_j) / s_j), 0, v_f)

with class-adjusted free-flow speed ``v_f`` and jam spacing ``s_j``.
"""

from typing import Union

import numpy as np

from .model import Link, VehicleClass


def link_speed(link: Link, spacing: float,
               vehicle_class: Union[VehicleClass, str] = VehicleClass.CAR) -> float:
    """
    Equilibrium speed (m/s) of a vehicle of ``vehicle_class`` at ``spacing``
    meters behind its leader on ``link``.
    """
    ffs = link.class_free_flow_speed(vehicle_class)
    jam = link.class_jam_spacing(vehicle_class)
    congested = link.wave_speed * (spacing - jam) / jam
    return float(min(max(congested, 0.0), ffs))


def speeds(spacing: np.ndarray, ffs: np.ndarray, jam: np.ndarray, wave: np.ndarray) -> np.ndarray:
    """Vectorized ``link_speed`` over per-vehicle parameter arrays."""
    return np.clip(wave * (spacing - jam) / jam, 0.0, ffs)



def lane_capacity(ffs: float, jam: float, wave: float) -> float:
    """Flow (veh/s per lane) at the peak of the triangular diagram."""
    return wave * ffs / (jam * (wave + ffs))


def scaled_wave_speed(wave: float, ffs: float, scale: float) -> float:
    """
    Backward wave speed that gives ``scale`` times the lane capacity at the
    same free-flow speed and jam spacing. Used when the simulated population
    is a sample of the real one: discharge capacity shrinks with it while
    storage (jam spacing) stays physical.
    """
    if not 0 < scale <= 1:
        raise ValueError('capacity scale must be in (0, 1]')
    return scale * wave * ffs / (ffs + (1.0 - scale) * wave)
