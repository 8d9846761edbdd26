"""Binary CFR capture files.

Layout (little-endian): a fixed header packed as ``HEADER_FORMAT`` followed by
the payload as float32 (real, imag) pairs, row-major over
(snapshot, subcarrier, antenna).
"""

import logging
import struct
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Dict, Tuple, Union

import numpy as np

from wisense_lab.channel.grid import CaptureSchedule, CfrTensor, GridConfig
from wisense_lab.channel.scene import ActivityClass
from wisense_lab.errors import (
    BadMagicError,
    CaptureFormatError,
    ConfigurationError,
    PayloadLengthError,
    TruncatedPayloadError,
    VersionMismatchError,
)

logger = logging.getLogger(__name__)

CAPTURE_MAGIC = b"WSLB"
CAPTURE_VERSION = 1
# magic, version, label code, campaign number,
# carrier_freq, bandwidth, antenna_spacing, inter_packet_period, start_time,
# n_subcarriers, n_rx_antennas, n_snapshots, seed
HEADER_FORMAT = "<4sHHHdddddIIIQ"
HEADER_SIZE = struct.calcsize(HEADER_FORMAT)
SAMPLE_DTYPE = np.dtype("<c8")


@dataclass(frozen=True)
class CaptureMeta:
    label: ActivityClass
    campaign: int = 0
    seed: int = 0

    def to_dict(self) -> Dict[str, Any]:
        return {"label": self.label.value, "campaign": self.campaign, "seed": self.seed}


def payload_size(n_snapshots: int, n_subcarriers: int, n_rx_antennas: int) -> int:
    """Bytes of CFR payload: 8 per complex sample"""
    return n_snapshots * n_subcarriers * n_rx_antennas * SAMPLE_DTYPE.itemsize


def write_capture(path: Union[str, Path], cfr: CfrTensor, meta: CaptureMeta) -> None:
    grid, schedule = cfr.grid, cfr.schedule
    header = struct.pack(
        HEADER_FORMAT,
        CAPTURE_MAGIC,
        CAPTURE_VERSION,
        meta.label.index,
        meta.campaign,
        grid.carrier_freq,
        grid.bandwidth,
        grid.antenna_spacing,
        schedule.inter_packet_period,
        schedule.start_time,
        grid.n_subcarriers,
        grid.n_rx_antennas,
        schedule.n_snapshots,
        meta.seed,
    )
    path = Path(path)
    with open(path, "wb") as f:
        f.write(header)
        f.write(np.ascontiguousarray(cfr.data, dtype=SAMPLE_DTYPE).tobytes())
    logger.info("capture written: %s (%d snapshots)", path, schedule.n_snapshots)


def read_header(path: Union[str, Path]) -> Tuple[GridConfig, CaptureSchedule, CaptureMeta]:
    """Validated header fields of a capture file, payload unread"""
    with open(path, "rb") as f:
        raw = f.read(HEADER_SIZE)
    if len(raw) >= 4 and raw[:4] != CAPTURE_MAGIC:
        raise BadMagicError(f"not a capture file: magic {raw[:4]!r}", "magic")
    if len(raw) < HEADER_SIZE:
        raise TruncatedPayloadError(
            f"header has {len(raw)} bytes, expected {HEADER_SIZE}", "header"
        )

    (_, version, label_code, campaign, carrier_freq, bandwidth, spacing, period,
     start_time, n_sub, n_ant, n_snap, seed) = struct.unpack(HEADER_FORMAT, raw)

    if version != CAPTURE_VERSION:
        raise VersionMismatchError(
            f"capture version {version} is not {CAPTURE_VERSION}", "version"
        )
    if label_code >= len(ActivityClass):
        raise CaptureFormatError(f"unknown class code {label_code}", "label")
    try:
        grid = GridConfig(carrier_freq, bandwidth, n_sub, n_ant, spacing)
    except ConfigurationError as e:
        raise CaptureFormatError(str(e), "grid") from e
    try:
        schedule = CaptureSchedule(period, n_snap, start_time)
    except ConfigurationError as e:
        raise CaptureFormatError(str(e), "schedule") from e
    return grid, schedule, CaptureMeta(ActivityClass.from_index(label_code), campaign, seed)


def read_capture(path: Union[str, Path]) -> Tuple[CfrTensor, CaptureMeta]:
    path = Path(path)
    grid, schedule, meta = read_header(path)

    expected = payload_size(schedule.n_snapshots, grid.n_subcarriers, grid.n_rx_antennas)
    actual = path.stat().st_size - HEADER_SIZE
    if actual < expected:
        raise TruncatedPayloadError(
            f"payload has {actual} bytes, expected {expected}", "n_snapshots"
        )
    if actual > expected:
        raise PayloadLengthError(
            f"payload has {actual} bytes, expected {expected}", "n_snapshots"
        )

    with open(path, "rb") as f:
        f.seek(HEADER_SIZE)
        data = np.fromfile(f, dtype=SAMPLE_DTYPE, count=expected // SAMPLE_DTYPE.itemsize)
    data = data.reshape(schedule.n_snapshots, grid.n_subcarriers, grid.n_rx_antennas)
    logger.debug("capture read: %s %s", path, meta.to_dict())
    return CfrTensor(data.astype(np.complex64, copy=False), grid, schedule), meta
