"""Fast invariant checks behind ``wisense validate``.

Every check builds a small synthetic input, runs one library operation and
compares against a closed-form expectation.
"""

import logging
import tempfile
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, List, Tuple

import numpy as np

from wisense_lab import SPEED_OF_LIGHT
from wisense_lab.channel.grid import CaptureSchedule, CfrTensor, GridConfig
from wisense_lab.channel.impairments import ImpairmentParams, apply_impairments
from wisense_lab.channel.scene import ActivityClass, Scene, ScattererTrajectory, StaticPath
from wisense_lab.channel.synthesis import synthesize_cfr
from wisense_lab.classifier.features import ClassifierInput, feature_matrix
from wisense_lab.classifier.model import Model, TrainingHyper, gradient_check
from wisense_lab.dsp.doppler import DopplerConfig, doppler_power_matrix, doppler_spectrum
from wisense_lab.dsp.sanitize import sanitize_phase
from wisense_lab.dsp.spectra import aoa_spectrum, range_spectrum
from wisense_lab.evaluation.metrics import compute_metrics, summarize
from wisense_lab.evaluation.splits import make_splits
from wisense_lab.storage.capture import CaptureMeta, read_capture, write_capture

logger = logging.getLogger(__name__)


@dataclass
class CheckResult:
    name: str
    passed: bool
    detail: str = ""


def _single_path(delay: float, n_snapshots: int = 1, **grid_kwargs) -> CfrTensor:
    grid = GridConfig(**grid_kwargs)
    schedule = CaptureSchedule(n_snapshots=n_snapshots)
    scene = Scene((0.0, 0.0), (4.0, 0.0), static_paths=[StaticPath(delay, 1.0 + 0j)])
    return synthesize_cfr(scene, grid, schedule)


def _moving_scene(rate: float, n_snapshots: int, **grid_kwargs) -> CfrTensor:
    """LOS plus a weak scatterer moving away along the extended baseline"""
    grid = GridConfig(**grid_kwargs)
    schedule = CaptureSchedule(n_snapshots=n_snapshots)
    duration = schedule.duration
    # beyond the receiver on the baseline, path length grows at twice the speed
    trajectory = ScattererTrajectory(
        np.array([[6.0, 0.0], [6.0 + rate / 2 * duration, 0.0]]),
        np.array([0.0, duration]),
        reflectivity=0.2,
    )
    scene = Scene(
        (0.0, 0.0), (4.0, 0.0), [StaticPath(4.0 / SPEED_OF_LIGHT, 1.0 + 0j)], [trajectory],
        ActivityClass.WALKING,
    )
    return synthesize_cfr(scene, grid, schedule)


def check_sanitize() -> Tuple[bool, str]:
    cfr = _moving_scene(1.0, 40, bandwidth=80e6 / 996 * 64, n_subcarriers=64)
    impaired = apply_impairments(cfr, ImpairmentParams(cfo=1e3, timing_offset=12.5e-9), seed=1)
    once = sanitize_phase(impaired)
    twice = sanitize_phase(once)
    reference = sanitize_phase(cfr)
    idempotent = np.allclose(twice.data, once.data, rtol=0, atol=1e-12)
    magnitude = np.allclose(np.abs(once.data), np.abs(impaired.data), rtol=0, atol=1e-12)
    recovered = np.allclose(once.data, reference.data, rtol=1e-9, atol=1e-12)
    return idempotent and magnitude and recovered, (
        f"idempotent={idempotent} magnitude={magnitude} recovered={recovered}"
    )


def check_range_peak() -> Tuple[bool, str]:
    profile = range_spectrum(_single_path(50e-9))
    return profile.peak_bin == 4, f"peak bin {profile.peak_bin}, expected 4"


def check_doppler_peak() -> Tuple[bool, str]:
    config = DopplerConfig()
    cfr = _moving_scene(1.0, config.window_len, bandwidth=80e6 / 996 * 16, n_subcarriers=16)
    vector = doppler_spectrum(cfr, config, cfr.schedule.inter_packet_period)
    return vector.peak_offset == 9, f"peak offset {vector.peak_offset}, expected +9"


def check_doppler_stream() -> Tuple[bool, str]:
    config = DopplerConfig()
    cfr = _moving_scene(1.5, 90, bandwidth=80e6 / 996 * 8, n_subcarriers=8)
    matrix = doppler_power_matrix(cfr, config, subsample_factor=2)
    period = 2 * cfr.schedule.inter_packet_period
    decimated = cfr.data[::2]
    worst = 0.0
    for i in range(len(matrix)):
        direct = doppler_spectrum(decimated[i:i + config.window_len], config, period)
        scale = max(direct.power.max(), 1e-300)
        worst = max(worst, float(np.max(np.abs(direct.power - matrix.power[i])) / scale))
    return worst < 1e-9, f"max relative deviation {worst:.2e}"


def check_aoa_broadside() -> Tuple[bool, str]:
    cfr = _single_path(20e-9, n_rx_antennas=4, bandwidth=80e6 / 996 * 8, n_subcarriers=8)
    profile = aoa_spectrum(cfr, subcarrier=4)
    return abs(profile.peak_angle) < 1e-9, f"peak at {profile.peak_angle} deg"


def check_softmax_and_gradients() -> Tuple[bool, str]:
    rng = np.random.default_rng(7)
    fft_len = 8
    model = Model.initial(2 * fft_len, TrainingHyper(init_scale=0.5, seed=3))
    samples = [
        ClassifierInput(rng.exponential(size=(6, fft_len)), label=i % 4) for i in range(8)
    ]
    probabilities = model.probabilities(feature_matrix(samples))
    sums_ok = np.allclose(probabilities.sum(axis=1), 1.0, rtol=0, atol=1e-9)
    error = gradient_check(model, samples, 1e-5)
    return sums_ok and error <= 1e-4, f"softmax sums ok={sums_ok}, gradient error {error:.2e}"


def check_protocol() -> Tuple[bool, str]:
    sets = make_splits(4, 9, seed=0)
    metrics = compute_metrics([1, 1, 2, 3], [0, 1, 2, 3])
    summary = summarize(range(1, 101))
    ok = (
        len(sets) == 108
        and metrics.accuracy == 0.75
        and abs(metrics.macro_f1 - (1 + 1 + 2 / 3) / 4) < 1e-12
        and (summary.median, summary.p25, summary.p75) == (50.5, 25.75, 75.25)
    )
    return ok, f"{len(sets)} sets, metrics {tuple(metrics)}, summary {tuple(summary)}"


def check_capture_round_trip() -> Tuple[bool, str]:
    rng = np.random.default_rng(11)
    grid = GridConfig(bandwidth=80e6 / 996 * 8, n_subcarriers=8, n_rx_antennas=2)
    data = (rng.normal(size=(5, 8, 2)) + 1j * rng.normal(size=(5, 8, 2))).astype(np.complex64)
    cfr = CfrTensor(data, grid, CaptureSchedule(n_snapshots=5))
    with tempfile.TemporaryDirectory() as tmp:
        path = Path(tmp) / "check.wslb"
        write_capture(path, cfr, CaptureMeta(ActivityClass.RUNNING, 2, 99))
        loaded, meta = read_capture(path)
    ok = (
        np.array_equal(loaded.data, data)
        and loaded.grid == grid
        and meta == CaptureMeta(ActivityClass.RUNNING, 2, 99)
    )
    return ok, "bit-exact" if ok else "round trip differs"


CHECKS: List[Tuple[str, Callable[[], Tuple[bool, str]]]] = [
    ("sanitize idempotence and impairment removal", check_sanitize),
    ("range peak at 50 ns", check_range_peak),
    ("doppler peak for 1 m/s", check_doppler_peak),
    ("doppler stream matches per-window spectra", check_doppler_stream),
    ("aoa broadside peak", check_aoa_broadside),
    ("softmax normalisation and gradients", check_softmax_and_gradients),
    ("cross-validation protocol and metrics", check_protocol),
    ("capture round trip", check_capture_round_trip),
]


def run_selftest() -> List[CheckResult]:
    results = []
    for name, check in CHECKS:
        try:
            passed, detail = check()
        except Exception as e:  # a crashing check is a failed check
            logger.exception("self-test %r raised", name)
            passed, detail = False, f"{type(e).__name__}: {e}"
        results.append(CheckResult(name, bool(passed), detail))
    return results
