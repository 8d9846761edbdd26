"""Bistatic single-bounce path geometry.

The receive array's broadside points from the receiver toward the
transmitter. Arrival angles are measured from broadside, positive clockwise from
it, so the line-of-sight path always arrives at 0 rad.
"""

from typing import NamedTuple, Union

import numpy as np

from wisense_lab import SPEED_OF_LIGHT
from wisense_lab.errors import DegenerateGeometryError

ArrayLike = Union[np.ndarray, tuple, list]

_COINCIDENCE_TOL = 1e-9  # meters


class PathGeometry(NamedTuple):
    path_length: np.ndarray
    delay: np.ndarray
    aoa: np.ndarray


def array_axes(tx_pos: ArrayLike, rx_pos: ArrayLike):
    """Unit broadside and array-axis vectors of the receive ULA"""
    tx = np.asarray(tx_pos, dtype=float)
    rx = np.asarray(rx_pos, dtype=float)
    baseline = tx - rx
    norm = np.hypot(baseline[0], baseline[1])
    if norm < _COINCIDENCE_TOL:
        raise DegenerateGeometryError("transmitter and receiver are coincident")
    broadside = baseline / norm
    axis = np.array([broadside[1], -broadside[0]])
    return broadside, axis


def arrival_angle(tx_pos: ArrayLike, rx_pos: ArrayLike, source_pos: ArrayLike) -> np.ndarray:
    """Angle at the receiver of the direction toward ``source_pos`` (radians)"""
    rx = np.asarray(rx_pos, dtype=float)
    src = np.asarray(source_pos, dtype=float)
    broadside, axis = array_axes(tx_pos, rx)
    direction = src - rx
    return np.arctan2(direction @ axis, direction @ broadside)


def path_geometry(
    tx_pos: ArrayLike, rx_pos: ArrayLike, scatterer_pos: ArrayLike
) -> PathGeometry:
    """Length, delay and arrival angle of the tx -> scatterer -> rx path.

    ``scatterer_pos`` may be a single point of shape (2,) or a trajectory of
    shape (..., 2); results broadcast accordingly.
    """
    tx = np.asarray(tx_pos, dtype=float)
    rx = np.asarray(rx_pos, dtype=float)
    pos = np.asarray(scatterer_pos, dtype=float)

    if not (np.all(np.isfinite(tx)) and np.all(np.isfinite(rx)) and np.all(np.isfinite(pos))):
        raise DegenerateGeometryError("positions must be finite")

    to_rx = np.linalg.norm(pos - rx, axis=-1)
    if np.any(to_rx < _COINCIDENCE_TOL):
        raise DegenerateGeometryError("scatterer coincides with the receiver")
    from_tx = np.linalg.norm(pos - tx, axis=-1)

    path_length = from_tx + to_rx
    return PathGeometry(
        path_length=path_length,
        delay=path_length / SPEED_OF_LIGHT,
        aoa=arrival_angle(tx, rx, pos),
    )


def los_delay(tx_pos: ArrayLike, rx_pos: ArrayLike) -> float:
    """Direct-path delay in seconds"""
    tx = np.asarray(tx_pos, dtype=float)
    rx = np.asarray(rx_pos, dtype=float)
    return float(np.linalg.norm(tx - rx) / SPEED_OF_LIGHT)
