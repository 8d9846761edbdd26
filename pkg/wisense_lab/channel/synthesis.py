"""Multipath CFR synthesis.

H[k, n, a] = sum_p gain_p * exp(-j 2 pi (carrier + f_n) tau_{p,a}(t_k)),
with tau_{p,a} = tau_p + a * d * sin(aoa_p) / c across the receive ULA.
"""

import logging

import numpy as np

from wisense_lab import SPEED_OF_LIGHT
from wisense_lab.channel.geometry import path_geometry
from wisense_lab.channel.grid import CaptureSchedule, CfrTensor, GridConfig
from wisense_lab.channel.scene import Scene

logger = logging.getLogger(__name__)

# Snapshots evaluated per block for moving scatterers
SYNTHESIS_BLOCK = 512


def antenna_delays(grid: GridConfig, aoa) -> np.ndarray:
    """Extra delay of every antenna for arrival angle(s) ``aoa``, shape aoa.shape + (A,)"""
    elements = np.arange(grid.n_rx_antennas) * grid.antenna_spacing
    return np.sin(np.asarray(aoa, dtype=float))[..., None] * elements / SPEED_OF_LIGHT


def path_response(grid: GridConfig, delay, aoa) -> np.ndarray:
    """Unit-gain response of path(s) with the given delay/aoa.

    Scalars give shape (N, A); arrays of shape (K,) give (K, N, A).
    """
    delay = np.asarray(delay, dtype=float)
    tau = delay[..., None] + antenna_delays(grid, aoa)  # (..., A)
    freqs = grid.subcarrier_frequencies  # (N,)
    return np.exp(-2j * np.pi * freqs[:, None] * tau[..., None, :])


def synthesize_cfr(scene: Scene, grid: GridConfig, schedule: CaptureSchedule) -> CfrTensor:
    """Deterministic CFR of ``scene`` sampled on ``schedule``"""
    shape = (schedule.n_snapshots, grid.n_subcarriers, grid.n_rx_antennas)
    data = np.zeros(shape, dtype=np.complex128)

    if scene.static_paths:
        static = np.zeros(shape[1:], dtype=np.complex128)
        for path in scene.static_paths:
            static += path.gain * path_response(grid, path.delay, path.aoa)
        data += static[None, :, :]

    times = schedule.times
    for trajectory in scene.scatterers:
        for start in range(0, schedule.n_snapshots, SYNTHESIS_BLOCK):
            stop = min(start + SYNTHESIS_BLOCK, schedule.n_snapshots)
            geometry = path_geometry(
                scene.tx_pos, scene.rx_pos, trajectory.position(times[start:stop])
            )
            data[start:stop] += trajectory.reflectivity * path_response(
                grid, geometry.delay, geometry.aoa
            )

    logger.debug(
        "synthesized %s CFR from %d static paths and %d scatterers",
        shape, len(scene.static_paths), len(scene.scatterers),
    )
    return CfrTensor(data, grid, schedule)
