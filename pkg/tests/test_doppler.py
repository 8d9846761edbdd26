"""
Doppler spectrum and stream tests
"""

import numpy as np
import pytest

from conftest import narrow_grid, receding_cfr
from wisense_lab import SPEED_OF_LIGHT
from wisense_lab.channel.grid import CaptureSchedule, CfrTensor
from wisense_lab.channel.impairments import ImpairmentParams, apply_impairments
from wisense_lab.channel.scene import ActivityClass, generate_activity_scene
from wisense_lab.channel.synthesis import synthesize_cfr
from wisense_lab.dsp.doppler import (
    DopplerConfig,
    doppler_power_matrix,
    doppler_spectrum,
    doppler_vector_stream,
)
from wisense_lab.dsp.sanitize import sanitize_phase
from wisense_lab.errors import ConfigurationError, InsufficientDataError, ShapeMismatchError

TC = 7.5e-3
WAVELENGTH = SPEED_OF_LIGHT / 5.785e9
CONFIG = DopplerConfig()


def static_cfr(n_snapshots: int) -> CfrTensor:
    scene = generate_activity_scene(ActivityClass.EMPTY, 1.0, seed=12)
    return synthesize_cfr(scene, narrow_grid(16, 2), CaptureSchedule(TC, n_snapshots))


class TestDopplerConfig:

    def test_defaults(self):
        assert (CONFIG.window_len, CONFIG.fft_len, CONFIG.stride) == (25, 64, 1)
        assert CONFIG.bin_width(TC) == pytest.approx(2.083, abs=1e-3)
        assert CONFIG.min_snapshots(2) == 49

    @pytest.mark.parametrize("kwargs", [
        {"fft_len": 16},
        {"stride": 0},
        {"window_len": 0},
        {"window": "no-such-window"},
    ])
    def test_invalid(self, kwargs):
        with pytest.raises(ConfigurationError):
            DopplerConfig(**kwargs)


class TestDopplerSpectrum:

    def test_one_metre_per_second(self):
        """19.3 Hz at 2.083 Hz per bin lands nine bins above zero Doppler"""
        cfr = receding_cfr(1.0, 25, narrow_grid(16))
        vector = doppler_spectrum(cfr, CONFIG, TC)
        assert 1.0 / WAVELENGTH == pytest.approx(19.30, abs=0.01)
        assert vector.bin_width == pytest.approx(2.083, abs=1e-3)
        assert vector.fft_len == 64
        assert vector.peak_offset == 9

    def test_aliased_rate(self):
        """4 m/s exceeds lambda / (2 Tc) and folds to the bin of 4 - lambda / Tc"""
        assert WAVELENGTH / (2 * TC) == pytest.approx(3.455, abs=1e-3)
        cfr = receding_cfr(4.0, 25, narrow_grid(16))
        vector = doppler_spectrum(cfr, CONFIG, TC)
        expected = round((4.0 - WAVELENGTH / TC) / (WAVELENGTH * vector.bin_width))
        assert expected == -27
        assert vector.peak_offset == expected

    @pytest.mark.parametrize("offset", [-28, -17, -6, 6, 11, 20, 28])
    @pytest.mark.parametrize("fraction", [-0.3, 0.0, 0.3])
    def test_peak_oracle(self, offset, fraction):
        rate = (offset + fraction) * CONFIG.bin_width(TC) * WAVELENGTH
        vector = doppler_spectrum(receding_cfr(rate, 25, narrow_grid(8)), CONFIG, TC)
        assert vector.peak_offset == offset

    def test_static_scene_concentrated_at_zero(self):
        vector = doppler_spectrum(static_cfr(25), CONFIG, TC)
        assert vector.static_power > 0
        assert np.max(vector.power) <= 1e-4 * vector.static_power

    def test_non_negative_and_centred(self):
        vector = doppler_spectrum(receding_cfr(1.7, 25), CONFIG, TC)
        assert np.all(vector.power >= 0)
        assert vector.frequencies[32] == 0.0
        assert vector.frequencies[33] == pytest.approx(vector.bin_width)

    def test_parseval_with_rectangular_window(self):
        rng = np.random.default_rng(5)
        config = DopplerConfig(window="boxcar", detrend=False)
        window = rng.normal(size=(25, 6)) + 1j * rng.normal(size=(25, 6))
        vector = doppler_spectrum(window, config, TC)
        energy = np.mean(np.sum(np.abs(window) ** 2, axis=0))
        assert np.sum(vector.power) / config.fft_len == pytest.approx(energy, rel=1e-9)

    def test_identical_series_average(self):
        rng = np.random.default_rng(6)
        series = rng.normal(size=(25, 1)) + 1j * rng.normal(size=(25, 1))
        single = doppler_spectrum(series, CONFIG, TC)
        repeated = doppler_spectrum(np.repeat(series, 7, axis=1), CONFIG, TC)
        np.testing.assert_allclose(repeated.power, single.power, rtol=1e-12)

    def test_short_window(self):
        with pytest.raises(InsufficientDataError):
            doppler_spectrum(np.ones((24, 3), complex), CONFIG, TC)

    def test_long_window(self):
        with pytest.raises(ShapeMismatchError):
            doppler_spectrum(np.ones((26, 3), complex), CONFIG, TC)


class TestDopplerStream:

    def test_vector_count(self):
        assert len(doppler_vector_stream(static_cfr(280), CONFIG)) == 256
        # ceil(100 / 3) = 34 kept snapshots -> 10 windows
        assert len(doppler_vector_stream(static_cfr(100), CONFIG, subsample_factor=3)) == 10
        strided = DopplerConfig(stride=4)
        assert len(doppler_power_matrix(static_cfr(280), strided)) == 64

    def test_static_stream_constant(self):
        vectors = doppler_vector_stream(static_cfr(120), CONFIG)
        for vector in vectors[1:]:
            np.testing.assert_allclose(
                vector.power, vectors[0].power, rtol=0, atol=1e-9 * vectors[0].static_power
            )
            assert vector.static_power == pytest.approx(vectors[0].static_power, rel=1e-12)

    def test_matches_direct_spectra(self):
        config = DopplerConfig(stride=3)
        cfr = receding_cfr(1.4, 200, narrow_grid(8, 2))
        matrix = doppler_power_matrix(cfr, config, subsample_factor=2)
        decimated = cfr.data[::2]
        for i in range(len(matrix)):
            start = i * config.stride
            direct = doppler_spectrum(decimated[start:start + 25], config, 2 * TC)
            np.testing.assert_allclose(
                matrix.power[i], direct.power, rtol=1e-9, atol=1e-9 * direct.power.max()
            )
            assert matrix.static_power[i] == pytest.approx(direct.static_power, rel=1e-9)

    def test_timestamps(self):
        cfr = receding_cfr(1.0, 60)
        vectors = doppler_vector_stream(cfr, CONFIG, subsample_factor=2)
        assert vectors[0].timestamp == pytest.approx(cfr.times[48])
        assert vectors[1].timestamp == pytest.approx(cfr.times[50])

    def test_decimation_halves_doppler_span(self):
        cfr = receding_cfr(1.0, 120)
        full = doppler_power_matrix(cfr, CONFIG, 1)
        halved = doppler_power_matrix(cfr, CONFIG, 2)
        assert halved.bin_width == pytest.approx(full.bin_width / 2)
        assert halved.bin_width == pytest.approx(1 / (64 * 2 * TC))

    def test_too_few_snapshots(self):
        with pytest.raises(InsufficientDataError, match="49"):
            doppler_power_matrix(static_cfr(48), CONFIG, subsample_factor=2)

    def test_workers_do_not_change_results(self):
        cfr = receding_cfr(2.1, 330, narrow_grid(8, 2))
        serial = doppler_power_matrix(cfr, CONFIG, workers=1)
        parallel = doppler_power_matrix(cfr, CONFIG, workers=4)
        assert len(serial) > 64 * 4
        np.testing.assert_allclose(
            parallel.power, serial.power, rtol=1e-12, atol=1e-12 * serial.power.max()
        )
        np.testing.assert_allclose(parallel.static_power, serial.static_power, rtol=1e-12)

    def test_invariant_to_removed_impairments(self):
        clean = receding_cfr(1.3, 80, narrow_grid(32))
        impaired = apply_impairments(
            clean, ImpairmentParams(cfo=1e3, timing_offset=12.5e-9), seed=2
        )
        reference = doppler_power_matrix(sanitize_phase(clean), CONFIG).power
        recovered = doppler_power_matrix(sanitize_phase(impaired), CONFIG).power
        assert np.max(np.abs(recovered - reference)) <= 1e-6 * np.max(reference)
