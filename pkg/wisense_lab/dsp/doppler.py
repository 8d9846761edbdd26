"""Doppler vectors from sliding windows of CFR snapshots.

Each series (one subcarrier on one antenna) of a W-snapshot window is
mean-removed, tapered, zero-padded to ``fft_len`` and transformed across
time; the per-series power spectra are averaged. Bins are centred on zero
Doppler and positive bins belong to lengthening paths.
"""

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import List, Optional, Union

import numpy as np
from scipy.signal import get_window

from wisense_lab.channel.grid import CfrTensor
from wisense_lab.errors import ConfigurationError, InsufficientDataError, ShapeMismatchError

logger = logging.getLogger(__name__)

# Windows per covariance chunk; fixed so results never depend on `workers`
STREAM_CHUNK = 64


@dataclass(frozen=True)
class DopplerConfig:
    window_len: int = 25
    fft_len: int = 64
    stride: int = 1
    window: str = "hann"
    detrend: bool = True

    def __post_init__(self):
        if self.window_len < 1:
            raise ConfigurationError(f"window_len must be positive, got {self.window_len}")
        if self.fft_len < self.window_len:
            raise ConfigurationError(
                f"fft_len ({self.fft_len}) must be >= window_len ({self.window_len})"
            )
        if self.stride < 1:
            raise ConfigurationError(f"stride must be >= 1, got {self.stride}")
        try:
            get_window(self.window, self.window_len)
        except ValueError as e:
            raise ConfigurationError(f"unknown taper {self.window!r}: {e}") from e

    def taper(self) -> np.ndarray:
        return get_window(self.window, self.window_len).astype(float)

    def bin_width(self, effective_period: float) -> float:
        return 1.0 / (self.fft_len * effective_period)

    def min_snapshots(self, subsample_factor: int = 1) -> int:
        """Snapshots needed for one vector at the given decimation"""
        return subsample_factor * (self.window_len - 1) + 1

    def to_dict(self):
        return {
            "window_len": self.window_len,
            "fft_len": self.fft_len,
            "stride": self.stride,
            "window": self.window,
            "detrend": self.detrend,
        }


@dataclass(frozen=True, eq=False)
class DopplerVector:
    """Zero-centred Doppler power spectrum of one window.

    ``static_power`` is the zero-Doppler power taken out by mean removal,
    in the same units as ``power``.
    """
    power: np.ndarray
    bin_width: float
    timestamp: float
    static_power: float = 0.0

    @property
    def fft_len(self) -> int:
        return self.power.size

    @property
    def frequencies(self) -> np.ndarray:
        return (np.arange(self.fft_len) - self.fft_len // 2) * self.bin_width

    @property
    def peak_offset(self) -> int:
        """Signed bin offset of the strongest bin from zero Doppler"""
        return int(np.argmax(self.power)) - self.fft_len // 2


@dataclass(frozen=True, eq=False)
class DopplerMatrix:
    """A stream of Doppler vectors stacked as rows"""
    power: np.ndarray  # (n_vectors, fft_len)
    bin_width: float
    timestamps: np.ndarray
    static_power: np.ndarray

    def __len__(self) -> int:
        return self.power.shape[0]

    def __getitem__(self, i: int) -> DopplerVector:
        return DopplerVector(
            self.power[i], self.bin_width, float(self.timestamps[i]), float(self.static_power[i])
        )

    @property
    def frequencies(self) -> np.ndarray:
        fft_len = self.power.shape[1]
        return (np.arange(fft_len) - fft_len // 2) * self.bin_width

    def vectors(self) -> List[DopplerVector]:
        return [self[i] for i in range(len(self))]


def _as_series(window: Union[CfrTensor, np.ndarray]) -> np.ndarray:
    data = window.data if isinstance(window, CfrTensor) else np.asarray(window)
    if data.ndim == 1:
        data = data[:, None]
    return data.reshape(data.shape[0], -1).astype(np.complex128, copy=False)


def doppler_spectrum(
    window: Union[CfrTensor, np.ndarray],
    config: DopplerConfig,
    effective_period: float,
    timestamp: float = 0.0,
) -> DopplerVector:
    """Doppler vector of exactly ``config.window_len`` snapshots.

    ``window`` is a CfrTensor or an array whose first axis is time; the
    remaining axes are flattened into independent series.
    """
    x = _as_series(window)
    W = config.window_len
    if x.shape[0] < W:
        raise InsufficientDataError(f"Doppler window needs {W} snapshots, got {x.shape[0]}")
    if x.shape[0] > W:
        raise ShapeMismatchError(f"Doppler window has {x.shape[0]} snapshots, expected {W}")

    taper = config.taper()
    static_power = 0.0
    if config.detrend:
        mean = x.mean(axis=0)
        x = x - mean
        static_power = float(taper.sum() ** 2 * np.mean(np.abs(mean) ** 2))

    spectra = np.fft.fft(np.conj(x * taper[:, None]), n=config.fft_len, axis=0)
    power = np.fft.fftshift(np.mean(np.abs(spectra) ** 2, axis=1))
    return DopplerVector(power, config.bin_width(effective_period), timestamp, static_power)


def _window_operator(config: DopplerConfig) -> np.ndarray:
    """(fft_len, W) matrix mapping a conjugated window to its tapered spectrum"""
    W, L = config.window_len, config.fft_len
    dft = np.exp(-2j * np.pi * np.outer(np.arange(L), np.arange(W)) / L)
    operator = dft * config.taper()[None, :]
    if config.detrend:
        operator = operator @ (np.eye(W) - np.full((W, W), 1.0 / W))
    return operator


def _chunk_power(x: np.ndarray, starts: np.ndarray, config: DopplerConfig, operator: np.ndarray):
    W = config.window_len
    n_series = x.shape[1]
    lo, hi = starts[0], starts[-1] + W
    block = x[lo:hi]
    gram = block @ block.conj().T  # gram[i, j] = sum_s x_i conj(x_j)

    rows = (starts - lo)[:, None] + np.arange(W)[None, :]
    cov = gram[rows[:, :, None], rows[:, None, :]]  # (c, W, W)

    # P_l = sum_{n,m} M[l,n] conj(M[l,m]) cov[m,n] / S
    projected = np.conj(operator)[None, :, :] @ cov  # (c, L, W)
    power = np.einsum("ln,cln->cl", operator, projected).real / n_series
    np.maximum(power, 0.0, out=power)

    if config.detrend:
        static = config.taper().sum() ** 2 / W ** 2 * cov.sum(axis=(1, 2)).real / n_series
    else:
        static = np.zeros(len(starts))
    return np.fft.fftshift(power, axes=1), static


def doppler_power_matrix(
    cfr: CfrTensor,
    config: DopplerConfig,
    subsample_factor: int = 1,
    workers: Optional[int] = 1,
) -> DopplerMatrix:
    """All Doppler vectors of a capture, computed from windowed covariances.

    Every ``subsample_factor``-th snapshot is kept (effective period k * Tc)
    and a ``window_len`` window slides over the result with ``stride``.
    """
    k = subsample_factor
    if k < 1:
        raise ConfigurationError(f"subsample_factor must be >= 1, got {k}")
    minimum = config.min_snapshots(k)
    if cfr.n_snapshots < minimum:
        raise InsufficientDataError(
            f"Doppler stream with W={config.window_len}, k={k} needs at least "
            f"{minimum} snapshots, got {cfr.n_snapshots}"
        )

    x = _as_series(cfr.data[::k])
    times = cfr.times[::k]
    n_vectors = (x.shape[0] - config.window_len) // config.stride + 1
    starts = np.arange(n_vectors) * config.stride
    chunks = [starts[i:i + STREAM_CHUNK] for i in range(0, n_vectors, STREAM_CHUNK)]
    operator = _window_operator(config)
    logger.debug(
        "doppler stream: k=%d, %d vectors in %d chunks, workers=%s",
        k, n_vectors, len(chunks), workers,
    )

    def run(chunk):
        return _chunk_power(x, chunk, config, operator)

    if workers and workers > 1 and len(chunks) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(run, chunks))
    else:
        results = [run(chunk) for chunk in chunks]

    power = np.concatenate([r[0] for r in results], axis=0)
    static = np.concatenate([r[1] for r in results])
    period = k * cfr.schedule.inter_packet_period
    return DopplerMatrix(
        power=power,
        bin_width=config.bin_width(period),
        timestamps=times[starts + config.window_len - 1],
        static_power=static,
    )


def doppler_vector_stream(
    cfr: CfrTensor,
    config: DopplerConfig,
    subsample_factor: int = 1,
    workers: Optional[int] = 1,
) -> List[DopplerVector]:
    """One DopplerVector per window; count is (ceil(n / k) - W) // stride + 1"""
    return doppler_power_matrix(cfr, config, subsample_factor, workers).vectors()
