"""Hardware phase impairments and additive receiver noise."""

import logging
import math
from dataclasses import dataclass

import numpy as np

from wisense_lab.channel.grid import CfrTensor
from wisense_lab.errors import ConfigurationError, UndefinedSnrError

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ImpairmentParams:
    """Per-snapshot CFO rotation, phase jitter and timing offset.

    The timing offset of snapshot k is ``timing_offset + N(0, timing_jitter_std^2)``.
    All zeros means ideal hardware.
    """
    cfo: float = 0.0
    timing_offset: float = 0.0
    timing_jitter_std: float = 0.0
    common_phase_jitter_std: float = 0.0

    def __post_init__(self):
        values = (self.cfo, self.timing_offset, self.timing_jitter_std, self.common_phase_jitter_std)
        if not all(math.isfinite(v) for v in values):
            raise ConfigurationError("impairment parameters must be finite")
        if self.timing_jitter_std < 0 or self.common_phase_jitter_std < 0:
            raise ConfigurationError("jitter standard deviations must be non-negative")

    @property
    def is_ideal(self) -> bool:
        return (
            self.cfo == 0
            and self.timing_offset == 0
            and self.timing_jitter_std == 0
            and self.common_phase_jitter_std == 0
        )


def apply_impairments(cfr: CfrTensor, imp: ImpairmentParams, seed: int) -> CfrTensor:
    """Rotate each snapshot by CFO + jitter and tilt it by its timing offset"""
    if imp.is_ideal:
        return cfr

    rng = np.random.default_rng(seed)
    n = cfr.n_snapshots
    jitter = rng.normal(0.0, 1.0, n) * imp.common_phase_jitter_std
    timing = imp.timing_offset + rng.normal(0.0, 1.0, n) * imp.timing_jitter_std

    common = np.exp(1j * (2 * np.pi * imp.cfo * cfr.times + jitter))  # (K,)
    offsets = cfr.grid.baseband_offsets  # (N,)
    ramp = np.exp(-2j * np.pi * timing[:, None] * offsets[None, :])  # (K, N)

    data = cfr.data * (common[:, None] * ramp)[:, :, None]
    return cfr.with_data(data)


def add_noise(cfr: CfrTensor, snr_db: float, seed: int) -> CfrTensor:
    """Circular complex Gaussian noise at ``snr_db`` relative to mean |H|^2.

    ``snr_db = inf`` returns the input untouched.
    """
    if math.isinf(snr_db) and snr_db > 0:
        return cfr
    if math.isnan(snr_db) or math.isinf(snr_db):
        raise ConfigurationError(f"snr_db must be a finite number or +inf, got {snr_db}")

    signal_power = float(np.mean(np.abs(cfr.data) ** 2))
    if signal_power == 0:
        raise UndefinedSnrError("cannot add noise at a given SNR to an all-zero CFR")

    with np.errstate(over="ignore"):
        variance = float(signal_power * np.float64(10.0) ** (-snr_db / 10))
    if not math.isfinite(variance):
        raise ConfigurationError(f"noise variance overflows at snr_db={snr_db}")
    rng = np.random.default_rng(seed)
    noise = rng.standard_normal(cfr.shape) + 1j * rng.standard_normal(cfr.shape)
    noise *= math.sqrt(variance / 2)
    logger.debug("adding noise: snr=%.1f dB, variance=%.3e", snr_db, variance)
    return cfr.with_data(cfr.data + noise)
