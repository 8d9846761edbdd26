"""802.11ax OFDMA resource units of an 80 MHz channel.

Idealised contiguous mapping: RUk-484 covers subcarriers
[(k-1)*498, (k-1)*498 + 484) and RUk-242 covers [(k-1)*249, (k-1)*249 + 242).
"""

import re
from dataclasses import dataclass
from typing import List

from wisense_lab import SPEED_OF_LIGHT
from wisense_lab.channel.grid import CfrTensor, GridConfig
from wisense_lab.errors import (
    ConfigurationError,
    UnknownRuError,
    UnsupportedChannelizationError,
)

SUPPORTED_SUBCARRIERS = 996
# tones -> (number of units, block stride in subcarriers)
RU_PLAN = {996: (1, 996), 484: (2, 498), 242: (4, 249)}

_RU_NAME = re.compile(r"^RU(\d+)-(\d+)$")


@dataclass(frozen=True, order=True)
class RuId:
    index: int
    tones: int

    def __post_init__(self):
        if self.tones not in RU_PLAN:
            raise UnknownRuError(f"unsupported RU size {self.tones}")
        count, _ = RU_PLAN[self.tones]
        if not 1 <= self.index <= count:
            raise UnknownRuError(f"RU index {self.index} out of range for {self.tones}-tone units")

    @property
    def name(self) -> str:
        return f"RU{self.index}-{self.tones}"

    def __str__(self) -> str:
        return self.name

    @classmethod
    def parse(cls, name: str) -> "RuId":
        """Parse the ``RU{index}-{tones}`` notation"""
        match = _RU_NAME.match(name.strip())
        if not match:
            raise UnknownRuError(f"malformed RU name {name!r}, expected e.g. 'RU1-996'")
        return cls(int(match.group(1)), int(match.group(2)))

    @classmethod
    def all_default(cls) -> List["RuId"]:
        """The seven units of the RU sweep, widest first"""
        return [
            cls(index, tones)
            for tones in (996, 484, 242)
            for index in range(1, RU_PLAN[tones][0] + 1)
        ]


@dataclass(frozen=True)
class RuEntry:
    ru: RuId
    start: int
    count: int

    @property
    def stop(self) -> int:
        return self.start + self.count


@dataclass(frozen=True)
class RuLayout:
    channel_bandwidth: float
    subcarrier_spacing: float
    entries: List[RuEntry]

    def lookup(self, ru: RuId) -> RuEntry:
        for entry in self.entries:
            if entry.ru == ru:
                return entry
        raise UnknownRuError(f"{ru.name} is not part of this layout")

    def bandwidth(self, ru: RuId) -> float:
        return self.lookup(ru).count * self.subcarrier_spacing

    @property
    def names(self) -> List[str]:
        return [entry.ru.name for entry in self.entries]


def ru_layout(grid: GridConfig) -> RuLayout:
    if grid.n_subcarriers != SUPPORTED_SUBCARRIERS:
        raise UnsupportedChannelizationError(
            f"RU layout needs a {SUPPORTED_SUBCARRIERS}-subcarrier grid, got {grid.n_subcarriers}"
        )
    entries = [
        RuEntry(ru, (ru.index - 1) * RU_PLAN[ru.tones][1], ru.tones)
        for ru in RuId.all_default()
    ]
    return RuLayout(grid.bandwidth, grid.subcarrier_spacing, entries)


def slice_subcarriers(cfr: CfrTensor, start: int, count: int) -> CfrTensor:
    """Project onto subcarriers [start, start + count), keeping absolute frequencies"""
    grid = cfr.grid
    if start < 0 or count < 1 or start + count > grid.n_subcarriers:
        raise ConfigurationError(
            f"subcarrier range [{start}, {start + count}) outside [0, {grid.n_subcarriers})"
        )
    if start == 0 and count == grid.n_subcarriers:
        return cfr

    spacing = grid.subcarrier_spacing
    bandwidth = count * spacing
    # Keep carrier + f_n of every kept subcarrier where it was
    carrier = grid.carrier_freq + start * spacing - grid.bandwidth / 2 + bandwidth / 2
    sub_grid = GridConfig(
        carrier_freq=carrier,
        bandwidth=bandwidth,
        n_subcarriers=count,
        n_rx_antennas=grid.n_rx_antennas,
        antenna_spacing=grid.antenna_spacing,
    )
    data = cfr.data[:, start:start + count, :].copy()
    return CfrTensor(data, sub_grid, cfr.schedule, check_finite=False)


def slice_ru(cfr: CfrTensor, ru: RuId) -> CfrTensor:
    entry = ru_layout(cfr.grid).lookup(ru)
    return slice_subcarriers(cfr, entry.start, entry.count)


def range_granularity(bandwidth: float) -> float:
    """One-way path-length resolution c / B in meters"""
    if not bandwidth > 0:
        raise ConfigurationError(f"bandwidth must be positive, got {bandwidth}")
    return SPEED_OF_LIGHT / bandwidth
