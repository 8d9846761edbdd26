"""
CFR synthesis and grid container tests
"""

import numpy as np
import pytest

from conftest import SPACING, narrow_grid, receding_scene
from wisense_lab import SPEED_OF_LIGHT
from wisense_lab.channel.grid import CaptureSchedule, CfrTensor, GridConfig
from wisense_lab.channel.scene import MicroMotion, Scene, ScattererTrajectory, StaticPath
from wisense_lab.channel.synthesis import synthesize_cfr
from wisense_lab.errors import ConfigurationError, ShapeMismatchError

TX, RX = (0.0, 0.0), (4.0, 0.0)


def brute_force(scene: Scene, grid: GridConfig, schedule: CaptureSchedule) -> np.ndarray:
    """Per-entry evaluation of the multipath sum for static paths"""
    data = np.zeros((schedule.n_snapshots, grid.n_subcarriers, grid.n_rx_antennas), complex)
    freqs = grid.subcarrier_frequencies
    for k in range(schedule.n_snapshots):
        for n in range(grid.n_subcarriers):
            for a in range(grid.n_rx_antennas):
                for path in scene.static_paths:
                    tau = path.delay + a * grid.antenna_spacing * np.sin(path.aoa) / SPEED_OF_LIGHT
                    data[k, n, a] += path.gain * np.exp(-2j * np.pi * freqs[n] * tau)
    return data


class TestGridConfig:

    def test_defaults(self, default_grid):
        assert default_grid.n_subcarriers == 996
        assert default_grid.subcarrier_spacing * 996 == pytest.approx(80e6, rel=1e-15)
        assert default_grid.wavelength == pytest.approx(0.05182, abs=1e-5)

    def test_baseband_offsets(self):
        grid = narrow_grid(4)
        np.testing.assert_allclose(
            grid.baseband_offsets, np.array([-2, -1, 0, 1]) * SPACING, rtol=0, atol=1e-6
        )

    @pytest.mark.parametrize("kwargs", [
        {"n_subcarriers": 0},
        {"n_rx_antennas": 0},
        {"bandwidth": -1.0},
        {"carrier_freq": 30e6},
        {"antenna_spacing": 0.0},
    ])
    def test_invalid(self, kwargs):
        with pytest.raises(ConfigurationError):
            GridConfig(**kwargs)

    def test_schedule_times(self):
        schedule = CaptureSchedule(7.5e-3, 4, start_time=1.0)
        np.testing.assert_allclose(schedule.times, [1.0, 1.0075, 1.015, 1.0225])
        assert CaptureSchedule.for_duration(120.0).n_snapshots == 16000


class TestCfrTensor:

    def test_shape_checked(self):
        grid = narrow_grid(4)
        with pytest.raises(ShapeMismatchError):
            CfrTensor(np.zeros((2, 5, 1)), grid, CaptureSchedule(n_snapshots=2))

    def test_non_finite_rejected(self):
        grid = narrow_grid(2)
        data = np.zeros((1, 2, 1), complex)
        data[0, 0, 0] = np.inf
        with pytest.raises(ShapeMismatchError):
            CfrTensor(data, grid, CaptureSchedule())

    def test_snapshot_slice_shifts_schedule(self):
        grid = narrow_grid(2)
        data = np.arange(10, dtype=complex).reshape(5, 2, 1)
        cfr = CfrTensor(data, grid, CaptureSchedule(0.01, 5))
        part = cfr.snapshots(2, 4)
        assert part.n_snapshots == 2
        assert part.times[0] == pytest.approx(0.02)
        np.testing.assert_array_equal(part.data, data[2:4])


class TestSynthesizeCfr:

    def test_empty_scene_is_zero(self):
        grid = narrow_grid(8)
        cfr = synthesize_cfr(Scene(TX, RX), grid, CaptureSchedule(n_snapshots=3))
        assert not np.any(cfr.data)

    def test_single_path_magnitude_and_phase_step(self):
        """Adjacent subcarriers differ by -2 pi spacing tau"""
        grid = GridConfig()
        tau = 50e-9
        cfr = synthesize_cfr(Scene(TX, RX, [StaticPath(tau, 1.0)]), grid, CaptureSchedule())
        np.testing.assert_allclose(np.abs(cfr.data), 1.0, rtol=0, atol=1e-12)
        steps = np.angle(cfr.data[0, 1:, 0] / cfr.data[0, :-1, 0])
        expected = np.angle(np.exp(-2j * np.pi * grid.subcarrier_spacing * tau))
        np.testing.assert_allclose(steps, expected, rtol=0, atol=1e-9)

    def test_matches_brute_force(self):
        grid = narrow_grid(6, n_rx_antennas=3)
        schedule = CaptureSchedule(n_snapshots=2)
        scene = Scene(TX, RX, [
            StaticPath(13.3e-9, 1.0, 0.0),
            StaticPath(30e-9, 0.3 * np.exp(1j), 0.4),
        ])
        np.testing.assert_allclose(
            synthesize_cfr(scene, grid, schedule).data,
            brute_force(scene, grid, schedule),
            rtol=1e-12, atol=1e-12,
        )

    def test_linearity(self):
        grid = narrow_grid(16, n_rx_antennas=2)
        schedule = CaptureSchedule(n_snapshots=20)
        first = Scene(TX, RX, [StaticPath(14e-9, 1.0)])
        second = receding_scene(1.3, schedule.duration)
        union = Scene(TX, RX, first.static_paths + second.static_paths, second.scatterers)
        total = synthesize_cfr(union, grid, schedule).data
        parts = synthesize_cfr(first, grid, schedule).data + synthesize_cfr(second, grid, schedule).data
        np.testing.assert_allclose(total, parts, rtol=1e-12, atol=1e-12)

    def test_static_scene_is_time_invariant(self):
        grid = narrow_grid(8, n_rx_antennas=2)
        stationary = ScattererTrajectory.stationary((2.0, 2.0), 0.4j)
        scene = Scene(TX, RX, [StaticPath(13.3e-9, 1.0)], [stationary])
        cfr = synthesize_cfr(scene, grid, CaptureSchedule(n_snapshots=6))
        assert scene.is_static
        for k in range(1, 6):
            np.testing.assert_array_equal(cfr.data[k], cfr.data[0])

    def test_micro_motion_varies_over_time(self):
        grid = narrow_grid(4)
        breathing = MicroMotion(amplitude=0.02, frequency=0.5)
        scene = Scene(TX, RX, [], [ScattererTrajectory.stationary((2.0, 2.0), 0.4, breathing)])
        cfr = synthesize_cfr(scene, grid, CaptureSchedule(n_snapshots=50))
        assert not scene.is_static
        assert not np.allclose(cfr.data[0], cfr.data[30])

    def test_deterministic(self):
        grid = narrow_grid(8)
        schedule = CaptureSchedule(n_snapshots=10)
        scene = receding_scene(2.0, schedule.duration)
        np.testing.assert_array_equal(
            synthesize_cfr(scene, grid, schedule).data, synthesize_cfr(scene, grid, schedule).data
        )
