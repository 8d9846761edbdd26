"""
Pytest Configuration
Shared fixtures: temporary directories, small grids and small campaign sets
"""

import shutil
import tempfile
from pathlib import Path

import numpy as np
import pytest

from wisense_lab import SPEED_OF_LIGHT
from wisense_lab.channel.grid import CaptureSchedule, GridConfig
from wisense_lab.channel.scene import ActivityClass, Scene, ScattererTrajectory, StaticPath
from wisense_lab.channel.synthesis import synthesize_cfr
from wisense_lab.storage.config import RunConfig

# Subcarrier spacing of the 996-tone 80 MHz grid
SPACING = 80e6 / 996


def narrow_grid(n_subcarriers: int = 8, n_rx_antennas: int = 1) -> GridConfig:
    """Same subcarrier spacing as the full grid, fewer subcarriers"""
    return GridConfig(
        bandwidth=SPACING * n_subcarriers,
        n_subcarriers=n_subcarriers,
        n_rx_antennas=n_rx_antennas,
    )


def receding_scene(rate: float, duration: float, reflectivity: complex = 0.2) -> Scene:
    """LOS plus one scatterer behind the receiver whose path grows at ``rate`` m/s"""
    trajectory = ScattererTrajectory(
        np.array([[6.0, 0.0], [6.0 + rate / 2 * duration, 0.0]]),
        np.array([0.0, duration]),
        reflectivity=reflectivity,
    )
    return Scene(
        (0.0, 0.0),
        (4.0, 0.0),
        [StaticPath(4.0 / SPEED_OF_LIGHT, 1.0 + 0j)],
        [trajectory],
        ActivityClass.WALKING,
    )


def receding_cfr(rate: float, n_snapshots: int, grid: GridConfig = None):
    grid = grid or narrow_grid()
    schedule = CaptureSchedule(n_snapshots=n_snapshots)
    return synthesize_cfr(receding_scene(rate, schedule.duration), grid, schedule)


def small_run_config(**evaluation) -> RunConfig:
    """Two-second campaigns that keep a full sweep to a few seconds"""
    return RunConfig.model_validate({
        "capture": {"duration": 2.4},
        "noise": {"snr_db": 20.0},
        "campaigns": {"base_seed": 5},
        "doppler": {"window_len": 25, "fft_len": 64},
        "classifier": {"n_vectors": 32, "epochs": 150, "learning_rate": 0.1},
        "evaluation": {"n_rounds": 1, "seed": 3, **evaluation},
    })


@pytest.fixture(scope="function")
def temp_dir():
    """Temporary directory, removed afterwards"""
    temp_path = Path(tempfile.mkdtemp())
    yield temp_path
    shutil.rmtree(temp_path, ignore_errors=True)


@pytest.fixture(scope="session")
def default_grid():
    return GridConfig()


@pytest.fixture(scope="session")
def small_config():
    return small_run_config()


def pytest_collection_modifyitems(session, config, items):
    """Full-size benchmarks are skipped unless selected with -m slow"""
    if not config.getoption("-m"):
        skip_slow = pytest.mark.skip("Skipping full-size benchmarks (use -m slow to run)")
        for item in items:
            if "slow" in item.keywords:
                item.add_marker(skip_slow)
