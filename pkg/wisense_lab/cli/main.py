"""
CLI Interface
Typer + Rich command line for simulation, spectra, sweeps and self-test
"""

import logging
import sys
from contextlib import contextmanager
from dataclasses import replace
from pathlib import Path
from typing import List, Optional

import numpy as np
import pandas as pd
import typer
from rich.console import Console
from rich.logging import RichHandler
from rich.markup import escape
from rich.progress import BarColumn, Progress, TaskProgressColumn, TextColumn
from rich.table import Table

from wisense_lab.dsp.doppler import doppler_power_matrix
from wisense_lab.dsp.sanitize import sanitize_phase
from wisense_lab.dsp.spectra import aoa_spectrum, range_spectrum
from wisense_lab.errors import (
    EXIT_INTERNAL,
    EXIT_OK,
    EXIT_USAGE,
    InternalError,
    SensingLabError,
)
from wisense_lab.evaluation.campaigns import (
    capture_filename,
    load_campaigns,
    plan_campaigns,
)
from wisense_lab.evaluation.reports import write_report_csv, write_summary_json
from wisense_lab.evaluation.sweeps import (
    PipelineConfig,
    SweepReport,
    ru_variants,
    run_sweep,
    sampling_variants,
)
from wisense_lab.ofdma.resource_units import RuId
from wisense_lab.selftest import run_selftest
from wisense_lab.storage.capture import read_capture, write_capture
from wisense_lab.storage.config import RunConfig, load_config, save_config

logger = logging.getLogger(__name__)

# typer re-exports the exception classes of the click it runs on, vendored or not
_click_errors = sys.modules[typer.BadParameter.__module__]
ClickException = _click_errors.ClickException
UsageError = _click_errors.UsageError

app = typer.Typer(
    name="wisense",
    help="Wi-Fi sensing lab - OFDMA channel simulation, Doppler spectra and activity-recognition sweeps",
    add_completion=False,
    pretty_exceptions_enable=False,
)

console = Console(stderr=True)


@contextmanager
def stage(name: str):
    """Tag errors escaping the block with the pipeline stage they came from"""
    try:
        yield
    except SensingLabError as e:
        if e.stage is None:
            e.stage = name
        raise
    except (typer.Exit, typer.Abort, ClickException):
        raise
    except Exception as e:
        raise InternalError(f"{type(e).__name__}: {e}", stage=name) from e


@app.callback()
def configure(
    verbose: bool = typer.Option(False, "--verbose", "-v", help="Debug logging"),
):
    """Configure logging for every command"""
    logging.basicConfig(
        level=logging.DEBUG if verbose else logging.INFO,
        format="%(message)s",
        handlers=[RichHandler(console=console, show_path=False)],
        force=True,
    )


def _load(config_path: Optional[Path]) -> RunConfig:
    with stage("config"):
        return load_config(config_path) if config_path else RunConfig()


def _progress() -> Progress:
    return Progress(
        TextColumn("[bold blue]{task.description}"),
        BarColumn(),
        TaskProgressColumn(),
        console=console,
        transient=True,
    )


# ============ Simulation ============

@app.command("simulate")
def simulate(
    config_path: Optional[Path] = typer.Option(None, "--config", "-c", help="TOML or JSON run config"),
    out: Path = typer.Option(..., "--out", "-o", help="Output directory for captures"),
):
    """Synthesise 4 classes x n campaigns of captures"""
    config = _load(config_path)
    out.mkdir(parents=True, exist_ok=True)
    campaigns = plan_campaigns(config)

    with _progress() as progress:
        task = progress.add_task("simulating", total=len(campaigns))
        for campaign in campaigns:
            with stage(f"simulate {campaign.campaign_id}"):
                path = out / capture_filename(campaign.label, campaign.number)
                write_capture(path, campaign.load(), campaign.meta())
            progress.advance(task)

    with stage("write config"):
        save_config(config, out / "run_config.json")
    console.print(f"[green]✓[/green] {len(campaigns)} captures written to {out}")


# ============ Spectra ============

@app.command("spectra")
def spectra(
    capture: Path = typer.Argument(..., help="Capture file (.wslb)"),
    out: Path = typer.Option(..., "--out", "-o", help="Output directory for CSVs"),
    config_path: Optional[Path] = typer.Option(None, "--config", "-c", help="Run config for Doppler settings"),
    snapshot: int = typer.Option(0, "--snapshot", help="Snapshot for range/AoA profiles"),
    subsample: int = typer.Option(1, "--subsample", "-k", help="Keep every k-th snapshot for Doppler"),
    no_sanitize: bool = typer.Option(False, "--no-sanitize", help="Skip phase sanitization"),
):
    """Range, Doppler and AoA profiles of one capture"""
    config = _load(config_path)
    with stage("read capture"):
        cfr, meta = read_capture(capture)
    if not no_sanitize:
        with stage("sanitize"):
            cfr = sanitize_phase(cfr)
    out.mkdir(parents=True, exist_ok=True)

    with stage("range"):
        profile = range_spectrum(cfr, snapshot)
        pd.DataFrame({
            "bin": np.arange(profile.power.size),
            "delay_s": profile.delays,
            "path_length_m": profile.path_lengths,
            "power": profile.power,
        }).to_csv(out / "range.csv", index=False)

    with stage("doppler"):
        matrix = doppler_power_matrix(cfr, config.doppler_config(), subsample, config.evaluation.workers)
        frame = pd.DataFrame(matrix.power, columns=[repr(float(f)) for f in matrix.frequencies])
        frame.insert(0, "static_power", matrix.static_power)
        frame.insert(0, "timestamp", matrix.timestamps)
        frame.to_csv(out / "doppler.csv", index=False)

    if cfr.grid.n_rx_antennas >= 2:
        with stage("aoa"):
            aoa = aoa_spectrum(cfr, snapshot)
            pd.DataFrame({"angle_deg": aoa.angles, "power": aoa.power}).to_csv(
                out / "aoa.csv", index=False
            )
    else:
        logger.warning("single-antenna capture: AoA profile skipped")

    console.print(
        f"[green]✓[/green] spectra of {meta.label.value}-{meta.campaign} written to {out}"
    )


# ============ Sweeps ============

def _print_reports(reports: List[SweepReport]):
    table = Table(show_header=True, header_style="bold magenta")
    table.add_column("Config")
    table.add_column("Sets", justify="right")
    table.add_column("Accuracy p50", justify="right")
    table.add_column("Accuracy p25-p75", justify="right")
    table.add_column("Macro-F1 p50", justify="right")
    for report in reports:
        acc, f1 = report.accuracy_summary, report.f1_summary
        table.add_row(
            report.config_label,
            str(len(report.results)),
            f"{acc.median:.3f}",
            f"{acc.p25:.3f}-{acc.p75:.3f}",
            f"{f1.median:.3f}",
        )
    console.print(table)


def _run_sweep(config: RunConfig, captures: Optional[Path], variants, out: Path, workers: Optional[int]):
    pipeline = PipelineConfig.from_run_config(config)
    if workers is not None:
        pipeline = replace(pipeline, workers=workers)
    with stage("campaigns"):
        campaigns = load_campaigns(captures) if captures else plan_campaigns(config)

    with _progress() as progress:
        tasks = {}

        def report(name: str, done: int, total: int):
            if name not in tasks:
                tasks[name] = progress.add_task(name, total=total)
            progress.update(tasks[name], completed=done)

        with stage("sweep"):
            reports = run_sweep(campaigns, variants, pipeline, progress=report)

    with stage("write reports"):
        write_report_csv(reports, out)
        write_summary_json(reports, out.with_suffix(".json"))
    _print_reports(reports)
    console.print(f"[green]✓[/green] {sum(len(r.results) for r in reports)} rows written to {out}")


@app.command("sweep-ru")
def sweep_ru_command(
    config_path: Optional[Path] = typer.Option(None, "--config", "-c", help="TOML or JSON run config"),
    captures: Optional[Path] = typer.Option(None, "--captures", help="Capture directory (default: simulate)"),
    out: Path = typer.Option(..., "--out", "-o", help="Report CSV; the summary goes next to it as .json"),
    ru: Optional[List[str]] = typer.Option(None, "--ru", help="RU name, repeatable (default: all 7)"),
    workers: Optional[int] = typer.Option(None, "--workers", "-w", min=1, help="Worker threads"),
):
    """Accuracy/F1 per OFDMA resource unit"""
    config = _load(config_path)
    with stage("config"):
        rus = [RuId.parse(name) for name in ru] if ru else config.ru_list()
        variants = ru_variants(rus, config.classifier.n_vectors)
    _run_sweep(config, captures, variants, out, workers)


@app.command("sweep-sampling")
def sweep_sampling_command(
    config_path: Optional[Path] = typer.Option(None, "--config", "-c", help="TOML or JSON run config"),
    captures: Optional[Path] = typer.Option(None, "--captures", help="Capture directory (default: simulate)"),
    out: Path = typer.Option(..., "--out", "-o", help="Report CSV; the summary goes next to it as .json"),
    factor: Optional[List[int]] = typer.Option(None, "--factor", "-k", help="Sub-sampling factor, repeatable"),
    workers: Optional[int] = typer.Option(None, "--workers", "-w", min=1, help="Worker threads"),
):
    """Accuracy/F1 per sub-sampling factor k with N/k input vectors"""
    config = _load(config_path)
    with stage("config"):
        if factor:
            n = config.classifier.n_vectors
            factors = [(k, n // k) for k in factor]
        else:
            factors = config.sampling_factors()
        variants = sampling_variants(factors, config.classifier.n_vectors, RuId.parse(config.evaluation.ru))
    _run_sweep(config, captures, variants, out, workers)


# ============ Self-test ============

@app.command("validate")
def validate():
    """Run the invariant self-test suite"""
    results = run_selftest()
    table = Table(show_header=True, header_style="bold magenta")
    table.add_column("Check")
    table.add_column("Result")
    table.add_column("Detail", style="dim")
    for result in results:
        mark = "[green]✓ pass[/green]" if result.passed else "[red]✗ fail[/red]"
        table.add_row(result.name, mark, escape(result.detail))
    console.print(table)

    failed = [r.name for r in results if not r.passed]
    if failed:
        raise InternalError(f"{len(failed)} self-test check(s) failed: {', '.join(failed)}", "validate")


def main(argv: Optional[List[str]] = None) -> int:
    """Run the CLI and map failures to exit codes (1 usage, 2 data, 3 internal)"""
    try:
        app(args=argv, prog_name="wisense", standalone_mode=False)
    except UsageError as e:
        e.show()
        return EXIT_USAGE
    except ClickException as e:
        e.show()
        return EXIT_USAGE
    except typer.Exit as e:
        return e.exit_code
    except SensingLabError as e:
        console.print(f"[red]error:[/red] {escape(str(e))}")
        return e.exit_code
    except Exception as e:
        console.print(f"[red]internal error:[/red] {escape(f'{type(e).__name__}: {e}')}")
        return EXIT_INTERNAL
    return EXIT_OK


def run():
    sys.exit(main())


if __name__ == "__main__":
    run()
