"""CSI phase sanitization.

Per snapshot and antenna, a least-squares line is fitted to the unwrapped
phase across subcarriers and its slope removed (timing offset), then the
snapshot is rotated so the first subcarrier has zero phase (CFO and common
phase). Magnitudes are left untouched.
"""

import logging
from typing import Tuple

import numpy as np

from wisense_lab.channel.grid import CfrTensor
from wisense_lab.errors import InsufficientDataError

logger = logging.getLogger(__name__)

SANITIZE_BLOCK = 1024


def _sanitize_block(block: np.ndarray, index: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    x = block.astype(np.complex128, copy=False)
    k, n_sub, n_ant = x.shape
    magnitude = np.abs(x)
    phase = np.unwrap(np.angle(x), axis=1)

    columns = phase.transpose(1, 0, 2).reshape(n_sub, k * n_ant)
    slope = np.polyfit(index, columns, 1)[0].reshape(k, n_ant)

    residual = phase - slope[:, None, :] * index[None, :, None]
    residual = residual - residual[:, :1, :]
    out = magnitude * np.exp(1j * residual)

    # all-zero snapshots come out as zeros; angle(0) == 0 keeps them finite
    skipped = ~np.any(magnitude > 0, axis=1)
    return out, skipped


def sanitize_phase_with_mask(cfr: CfrTensor) -> Tuple[CfrTensor, np.ndarray]:
    """Sanitized tensor plus the (snapshot, antenna) mask of skipped all-zero snapshots"""
    n_sub = cfr.grid.n_subcarriers
    if n_sub < 2:
        raise InsufficientDataError("phase sanitization needs at least 2 subcarriers")

    index = np.arange(n_sub, dtype=float)
    out = np.empty(cfr.shape, dtype=np.complex128)
    skipped = np.zeros((cfr.n_snapshots, cfr.grid.n_rx_antennas), dtype=bool)
    for start in range(0, cfr.n_snapshots, SANITIZE_BLOCK):
        stop = min(start + SANITIZE_BLOCK, cfr.n_snapshots)
        out[start:stop], skipped[start:stop] = _sanitize_block(cfr.data[start:stop], index)

    if skipped.any():
        logger.warning("sanitize_phase skipped %d zero-magnitude snapshot(s)", int(skipped.sum()))
    return cfr.with_data(out), skipped


def sanitize_phase(cfr: CfrTensor) -> CfrTensor:
    return sanitize_phase_with_mask(cfr)[0]
