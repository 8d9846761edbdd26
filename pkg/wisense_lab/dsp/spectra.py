"""Range (delay) and angle-of-arrival spectra of single CFR snapshots."""

from dataclasses import dataclass
from typing import Optional

import numpy as np

from wisense_lab import SPEED_OF_LIGHT
from wisense_lab.channel.grid import CfrTensor
from wisense_lab.errors import InsufficientApertureError, ShapeMismatchError


@dataclass(frozen=True, eq=False)
class RangeProfile:
    """Power over delay bins; bin b is delay b / bandwidth"""
    power: np.ndarray
    delay_bin_width: float

    @property
    def delays(self) -> np.ndarray:
        return np.arange(self.power.size) * self.delay_bin_width

    @property
    def path_lengths(self) -> np.ndarray:
        return self.delays * SPEED_OF_LIGHT

    @property
    def peak_bin(self) -> int:
        return int(np.argmax(self.power))


@dataclass(frozen=True, eq=False)
class AoaProfile:
    """Delay-and-sum beamscan power over an increasing angle grid (degrees)"""
    angles: np.ndarray
    power: np.ndarray
    n_antennas: int
    antenna_spacing: float

    @property
    def peak_angle(self) -> float:
        return float(self.angles[np.argmax(self.power)])

    def lobe_width(self, level_db: float = -3.0) -> float:
        """Width in degrees of the contiguous region around the peak above ``level_db``"""
        peak = int(np.argmax(self.power))
        threshold = self.power[peak] * 10 ** (level_db / 10)
        above = self.power >= threshold
        lo = peak
        while lo > 0 and above[lo - 1]:
            lo -= 1
        hi = peak
        while hi < above.size - 1 and above[hi + 1]:
            hi += 1
        return float(self.angles[hi] - self.angles[lo])


def _check_index(name: str, value: int, size: int):
    if not 0 <= value < size:
        raise ShapeMismatchError(f"{name} index {value} outside [0, {size})")


def range_spectrum(cfr: CfrTensor, snapshot: int = 0, antenna: int = 0) -> RangeProfile:
    """Power of the inverse DFT across subcarriers of one snapshot"""
    _check_index("snapshot", snapshot, cfr.n_snapshots)
    _check_index("antenna", antenna, cfr.grid.n_rx_antennas)
    response = cfr.data[snapshot, :, antenna].astype(np.complex128)
    cir = np.fft.ifft(response)
    return RangeProfile(np.abs(cir) ** 2, 1.0 / cfr.grid.bandwidth)


def default_angle_grid(step_deg: float = 0.5) -> np.ndarray:
    n_points = int(round(180.0 / step_deg)) + 1
    return np.linspace(-90.0, 90.0, n_points)


def aoa_spectrum(
    cfr: CfrTensor,
    snapshot: int = 0,
    subcarrier: Optional[int] = None,
    angle_grid: Optional[np.ndarray] = None,
) -> AoaProfile:
    """Beamscan |sum_a H[a] exp(+j 2 pi (d / lambda) a sin(theta))|^2.

    lambda is the wavelength of the chosen subcarrier (centre subcarrier by
    default); ``angle_grid`` is in degrees.
    """
    grid = cfr.grid
    if grid.n_rx_antennas < 2:
        raise InsufficientApertureError("AoA estimation needs at least 2 receive antennas")
    if subcarrier is None:
        subcarrier = grid.n_subcarriers // 2
    _check_index("snapshot", snapshot, cfr.n_snapshots)
    _check_index("subcarrier", subcarrier, grid.n_subcarriers)

    angles = default_angle_grid() if angle_grid is None else np.asarray(angle_grid, dtype=float)
    if angles.size > 1 and np.any(np.diff(angles) <= 0):
        raise ShapeMismatchError("angle grid must be strictly increasing")

    wavelength = SPEED_OF_LIGHT / grid.subcarrier_frequencies[subcarrier]
    elements = np.arange(grid.n_rx_antennas)
    steering = np.exp(
        2j * np.pi * (grid.antenna_spacing / wavelength)
        * np.sin(np.deg2rad(angles))[:, None] * elements[None, :]
    )
    snapshot_vector = cfr.data[snapshot, subcarrier, :].astype(np.complex128)
    power = np.abs(steering @ snapshot_vector) ** 2
    return AoaProfile(angles, power, grid.n_rx_antennas, grid.antenna_spacing)
