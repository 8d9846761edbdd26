"""
Command line tests: file outputs through CliRunner, exit codes through main()
"""

import json

import numpy as np
import pandas as pd
import pytest
import typer
from typer.testing import CliRunner

from conftest import SPACING, small_run_config
from wisense_lab.cli import app, main
from wisense_lab.cli.main import ClickException, UsageError, stage
from wisense_lab.errors import InternalError
from wisense_lab.evaluation.campaigns import plan_campaigns, write_campaigns
from wisense_lab.evaluation.reports import REPORT_COLUMNS
from wisense_lab.storage.config import save_config

runner = CliRunner()

TINY_CONFIG = {
    "grid": {"n_subcarriers": 64, "bandwidth": 64 * SPACING, "n_rx_antennas": 2},
    "capture": {"duration": 0.3},
    "noise": {"snr_db": None},
}


@pytest.fixture
def tiny_config(temp_dir):
    path = temp_dir / "tiny.json"
    path.write_text(json.dumps(TINY_CONFIG))
    return path


@pytest.fixture(scope="module")
def capture_set(tmp_path_factory):
    """Small full-band captures plus their config on disk"""
    root = tmp_path_factory.mktemp("captures")
    config = small_run_config()
    write_campaigns(plan_campaigns(config), root / "captures")
    save_config(config, root / "run.json")
    return root


@pytest.mark.integration
class TestSimulate:

    def test_writes_sixteen_captures(self, temp_dir, tiny_config):
        out = temp_dir / "captures"
        result = runner.invoke(app, ["simulate", "--config", str(tiny_config), "--out", str(out)])
        assert result.exit_code == 0, result.output
        captures = sorted(p.name for p in out.glob("*.wslb"))
        assert len(captures) == 16
        assert "running-3.wslb" in captures
        assert (out / "run_config.json").exists()

    def test_same_config_same_bytes(self, temp_dir, tiny_config):
        for name in ("a", "b"):
            assert main(["simulate", "-c", str(tiny_config), "-o", str(temp_dir / name)]) == 0
        for path in (temp_dir / "a").glob("*.wslb"):
            assert path.read_bytes() == (temp_dir / "b" / path.name).read_bytes()


class TestSpectra:

    @pytest.fixture
    def empty_capture(self, temp_dir, tiny_config):
        assert main(["simulate", "-c", str(tiny_config), "-o", str(temp_dir / "caps")]) == 0
        return temp_dir / "caps" / "empty-0.wslb"

    def test_static_scene_profiles(self, temp_dir, tiny_config, empty_capture):
        out = temp_dir / "spectra"
        result = runner.invoke(
            app, ["spectra", str(empty_capture), "--out", str(out), "--config", str(tiny_config)]
        )
        assert result.exit_code == 0, result.output

        doppler = pd.read_csv(out / "doppler.csv")
        assert list(doppler.columns[:2]) == ["timestamp", "static_power"]
        assert len(doppler.columns) == 2 + 64
        assert "0.0" in doppler.columns
        # 40 snapshots, W = 25
        assert len(doppler) == 16
        power = doppler.iloc[:, 2:].to_numpy()
        static = doppler["static_power"].to_numpy()
        assert np.all(power <= 1e-4 * static[:, None])

        assert len(pd.read_csv(out / "range.csv")) == 64
        aoa = pd.read_csv(out / "aoa.csv")
        assert list(aoa.columns) == ["angle_deg", "power"]

    def test_subsampled_doppler(self, temp_dir, tiny_config, empty_capture):
        out = temp_dir / "spectra"
        args = ["spectra", str(empty_capture), "-o", str(out), "-c", str(tiny_config), "-k", "1"]
        assert main(args) == 0
        # k = 2 keeps 20 snapshots, fewer than one window
        args[-1] = "2"
        assert main(args) == 2

    def test_truncated_capture_names_stage(self, temp_dir, empty_capture, capsys):
        empty_capture.write_bytes(empty_capture.read_bytes()[:-8])
        assert main(["spectra", str(empty_capture), "-o", str(temp_dir / "s")]) == 2
        assert "[read capture]" in capsys.readouterr().err


@pytest.mark.integration
class TestSweeps:

    def test_sweep_ru(self, temp_dir, capture_set):
        out = temp_dir / "ru.csv"
        args = [
            "sweep-ru", "--config", str(capture_set / "run.json"),
            "--captures", str(capture_set / "captures"), "--out", str(out),
        ]
        result = runner.invoke(app, args)
        assert result.exit_code == 0, result.output

        frame = pd.read_csv(out)
        assert list(frame.columns) == REPORT_COLUMNS
        assert len(frame) == 7 * 12
        assert frame["config_label"].unique().tolist()[:2] == ["RU1-996", "RU1-484"]
        summary = json.loads(out.with_suffix(".json").read_text())
        assert len(summary["configs"]) == 7

    def test_sweep_ru_workers_same_bytes(self, temp_dir, capture_set):
        base = [
            "sweep-ru", "-c", str(capture_set / "run.json"),
            "--captures", str(capture_set / "captures"), "--ru", "RU2-242",
        ]
        assert main(base + ["-o", str(temp_dir / "one.csv")]) == 0
        assert main(base + ["-o", str(temp_dir / "three.csv"), "--workers", "3"]) == 0
        assert (temp_dir / "one.csv").read_bytes() == (temp_dir / "three.csv").read_bytes()

    def test_sweep_sampling(self, temp_dir, capture_set):
        out = temp_dir / "sampling.csv"
        args = [
            "sweep-sampling", "-c", str(capture_set / "run.json"),
            "--captures", str(capture_set / "captures"), "-o", str(out), "-k", "1", "-k", "4",
        ]
        assert main(args) == 0
        frame = pd.read_csv(out)
        assert frame["config_label"].unique().tolist() == ["k1", "k4"]
        assert len(frame) == 24

    def test_unknown_ru(self, temp_dir, capture_set):
        args = [
            "sweep-ru", "--captures", str(capture_set / "captures"),
            "-o", str(temp_dir / "x.csv"), "--ru", "RU9-996",
        ]
        assert main(args) == 2


class TestExitCodes:

    def test_unknown_option(self):
        assert main(["--bogus"]) == 1

    def test_missing_required_option(self):
        assert main(["simulate"]) == 1

    def test_unknown_option_raises_usage_error(self):
        """Usage errors come from the click that typer actually runs on"""
        with pytest.raises(UsageError):
            app(args=["--bogus"], prog_name="wisense", standalone_mode=False)

    def test_help_exits_cleanly(self):
        assert main(["--help"]) == 0

    def test_invalid_config(self, temp_dir, capsys):
        path = temp_dir / "bad.json"
        path.write_text('{"grid": {"n_subcarriers": -4}}')
        assert main(["simulate", "-c", str(path), "-o", str(temp_dir / "out")]) == 1
        assert "[config]" in capsys.readouterr().err

    def test_validate(self):
        assert main(["validate"]) == 0

    def test_help(self):
        result = runner.invoke(app, ["--help"])
        assert result.exit_code == 0
        for command in ("simulate", "spectra", "sweep-ru", "sweep-sampling", "validate"):
            assert command in result.output


class TestStage:

    def test_click_errors_pass_through(self):
        with pytest.raises(typer.BadParameter):
            with stage("config"):
                raise typer.BadParameter("bad value")
        assert issubclass(typer.BadParameter, ClickException)

    def test_exit_passes_through(self):
        with pytest.raises(typer.Exit):
            with stage("config"):
                raise typer.Exit(0)

    def test_other_errors_become_internal(self):
        with pytest.raises(InternalError) as info:
            with stage("range"):
                raise KeyError("missing")
        assert info.value.stage == "range"
