"""Subcarrier grid, capture timing and the CFR tensor container."""

import math
from dataclasses import dataclass, field, replace
from typing import Any, Dict

import numpy as np

from wisense_lab import SPEED_OF_LIGHT
from wisense_lab.errors import ConfigurationError, ShapeMismatchError

DEFAULT_CARRIER_FREQ = 5.785e9  # channel 157
DEFAULT_BANDWIDTH = 80e6
DEFAULT_SUBCARRIERS = 996
DEFAULT_INTER_PACKET_PERIOD = 7.5e-3


@dataclass(frozen=True)
class GridConfig:
    """Idealised contiguous OFDM subcarrier grid plus the receive array"""

    carrier_freq: float = DEFAULT_CARRIER_FREQ
    bandwidth: float = DEFAULT_BANDWIDTH
    n_subcarriers: int = DEFAULT_SUBCARRIERS
    n_rx_antennas: int = 1
    antenna_spacing: float = SPEED_OF_LIGHT / DEFAULT_CARRIER_FREQ / 2

    def __post_init__(self):
        if self.n_subcarriers < 1:
            raise ConfigurationError(f"n_subcarriers must be positive, got {self.n_subcarriers}")
        if self.n_rx_antennas < 1:
            raise ConfigurationError(f"n_rx_antennas must be >= 1, got {self.n_rx_antennas}")
        if not self.bandwidth > 0:
            raise ConfigurationError(f"bandwidth must be positive, got {self.bandwidth}")
        if not self.carrier_freq > self.bandwidth / 2:
            raise ConfigurationError(
                f"carrier_freq {self.carrier_freq} must exceed half the bandwidth"
            )
        if not self.antenna_spacing > 0:
            raise ConfigurationError(f"antenna_spacing must be positive, got {self.antenna_spacing}")
        if not math.isclose(
            self.subcarrier_spacing * self.n_subcarriers, self.bandwidth, rel_tol=1e-15
        ):
            raise ConfigurationError("subcarrier_spacing * n_subcarriers does not match bandwidth")

    @property
    def subcarrier_spacing(self) -> float:
        return self.bandwidth / self.n_subcarriers

    @property
    def wavelength(self) -> float:
        return SPEED_OF_LIGHT / self.carrier_freq

    @property
    def baseband_offsets(self) -> np.ndarray:
        """Offset f_n = n * spacing - bandwidth / 2 of every subcarrier"""
        return np.arange(self.n_subcarriers) * self.subcarrier_spacing - self.bandwidth / 2

    @property
    def subcarrier_frequencies(self) -> np.ndarray:
        return self.carrier_freq + self.baseband_offsets

    def to_dict(self) -> Dict[str, Any]:
        return {
            "carrier_freq": self.carrier_freq,
            "bandwidth": self.bandwidth,
            "n_subcarriers": self.n_subcarriers,
            "n_rx_antennas": self.n_rx_antennas,
            "antenna_spacing": self.antenna_spacing,
        }


@dataclass(frozen=True)
class CaptureSchedule:
    """Snapshot k is captured at start_time + k * inter_packet_period"""

    inter_packet_period: float = DEFAULT_INTER_PACKET_PERIOD
    n_snapshots: int = 1
    start_time: float = 0.0

    def __post_init__(self):
        if not self.inter_packet_period > 0:
            raise ConfigurationError(
                f"inter_packet_period must be positive, got {self.inter_packet_period}"
            )
        if self.n_snapshots < 1:
            raise ConfigurationError(f"n_snapshots must be positive, got {self.n_snapshots}")

    @classmethod
    def for_duration(
        cls, duration: float, inter_packet_period: float = DEFAULT_INTER_PACKET_PERIOD,
        start_time: float = 0.0,
    ) -> "CaptureSchedule":
        """Schedule covering ``duration`` seconds of captures"""
        n_snapshots = int(round(duration / inter_packet_period))
        return cls(inter_packet_period, max(n_snapshots, 1), start_time)

    @property
    def times(self) -> np.ndarray:
        return self.start_time + np.arange(self.n_snapshots) * self.inter_packet_period

    @property
    def duration(self) -> float:
        return self.n_snapshots * self.inter_packet_period

    def to_dict(self) -> Dict[str, Any]:
        return {
            "inter_packet_period": self.inter_packet_period,
            "n_snapshots": self.n_snapshots,
            "start_time": self.start_time,
        }


@dataclass(frozen=True, eq=False)
class CfrTensor:
    """Complex CFR indexed by (snapshot, subcarrier, receive antenna)"""

    data: np.ndarray
    grid: GridConfig
    schedule: CaptureSchedule
    check_finite: bool = field(default=True, repr=False, compare=False)

    def __post_init__(self):
        data = np.asarray(self.data)
        if not np.iscomplexobj(data):
            data = data.astype(np.complex128)
        object.__setattr__(self, "data", data)

        expected = (self.schedule.n_snapshots, self.grid.n_subcarriers, self.grid.n_rx_antennas)
        if data.shape != expected:
            raise ShapeMismatchError(f"CFR data shape {data.shape} does not match {expected}")
        if self.check_finite and not np.all(np.isfinite(data)):
            raise ShapeMismatchError("CFR data contains non-finite entries")

    @property
    def shape(self):
        return self.data.shape

    @property
    def n_snapshots(self) -> int:
        return self.schedule.n_snapshots

    @property
    def times(self) -> np.ndarray:
        return self.schedule.times

    def with_data(self, data: np.ndarray) -> "CfrTensor":
        """Same grid and schedule, new values"""
        return replace(self, data=data)

    def snapshots(self, start: int, stop: int) -> "CfrTensor":
        """Time-slice [start, stop) with a shifted schedule"""
        start = max(start, 0)
        stop = min(stop, self.n_snapshots)
        if stop <= start:
            raise ShapeMismatchError(f"empty snapshot range [{start}, {stop})")
        schedule = CaptureSchedule(
            self.schedule.inter_packet_period,
            stop - start,
            self.schedule.start_time + start * self.schedule.inter_packet_period,
        )
        return CfrTensor(self.data[start:stop], self.grid, schedule, check_finite=False)
