"""Run configuration schema (TOML or JSON on disk)."""

import json
import logging
import tomllib
from pathlib import Path
from typing import Dict, List, Optional, Tuple, Union

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator

from wisense_lab import SPEED_OF_LIGHT
from wisense_lab.channel.grid import (
    DEFAULT_BANDWIDTH,
    DEFAULT_CARRIER_FREQ,
    DEFAULT_INTER_PACKET_PERIOD,
    DEFAULT_SUBCARRIERS,
    CaptureSchedule,
    GridConfig,
)
from wisense_lab.channel.impairments import ImpairmentParams
from wisense_lab.channel.scene import ActivityClass
from wisense_lab.classifier.model import TrainingHyper
from wisense_lab.dsp.doppler import DopplerConfig
from wisense_lab.errors import ConfigurationError
from wisense_lab.ofdma.resource_units import RuId

logger = logging.getLogger(__name__)

DEFAULT_FACTORS = (1, 2, 3, 4, 5)


class _Section(BaseModel):
    model_config = ConfigDict(extra="forbid")


class GridSection(_Section):
    carrier_freq: float = Field(DEFAULT_CARRIER_FREQ, gt=0)
    bandwidth: float = Field(DEFAULT_BANDWIDTH, gt=0)
    n_subcarriers: int = Field(DEFAULT_SUBCARRIERS, ge=1)
    n_rx_antennas: int = Field(1, ge=1)
    antenna_spacing: Optional[float] = Field(None, gt=0, description="null = half wavelength")


class CaptureSection(_Section):
    inter_packet_period: float = Field(DEFAULT_INTER_PACKET_PERIOD, gt=0)
    duration: float = Field(120.0, gt=0)
    start_time: float = 0.0


class ImpairmentSection(_Section):
    cfo: float = 2000.0
    timing_offset: float = 12.5e-9
    timing_jitter_std: float = Field(5e-9, ge=0)
    common_phase_jitter_std: float = Field(0.3, ge=0)


class NoiseSection(_Section):
    snr_db: Optional[float] = Field(20.0, description="null = noiseless")


class CampaignSection(_Section):
    base_seed: int = Field(2024, ge=0)
    n_campaigns: int = Field(4, ge=1)
    seeds: Optional[Dict[str, List[int]]] = Field(
        None, description="explicit seeds per class value, one per campaign"
    )

    @field_validator("seeds")
    @classmethod
    def _known_classes(cls, value):
        if value is not None:
            unknown = set(value) - set(ActivityClass.names())
            if unknown:
                raise ValueError(f"unknown classes in seeds: {sorted(unknown)}")
        return value


class DopplerSection(_Section):
    window_len: int = Field(25, ge=1)
    fft_len: int = Field(64, ge=1)
    stride: int = Field(1, ge=1)
    window: str = "hann"
    detrend: bool = True


class ClassifierSection(_Section):
    n_vectors: int = Field(256, ge=2)
    learning_rate: float = Field(0.05, gt=0)
    epochs: int = Field(500, ge=1)
    weight_decay: float = Field(1e-3, ge=0)
    init_scale: float = Field(0.01, ge=0)


class EvaluationSection(_Section):
    n_rounds: int = Field(9, ge=1)
    seed: int = Field(0, ge=0)
    workers: int = Field(1, ge=1)
    rus: List[str] = Field(default_factory=lambda: [ru.name for ru in RuId.all_default()])
    factors: Optional[List[Tuple[int, int]]] = Field(
        None, description="(k, N_k) pairs; null = k in 1..5 with N_k = n_vectors // k"
    )
    ru: str = "RU1-996"


class RunConfig(_Section):
    grid: GridSection = Field(default_factory=GridSection)
    capture: CaptureSection = Field(default_factory=CaptureSection)
    impairments: ImpairmentSection = Field(default_factory=ImpairmentSection)
    noise: NoiseSection = Field(default_factory=NoiseSection)
    campaigns: CampaignSection = Field(default_factory=CampaignSection)
    doppler: DopplerSection = Field(default_factory=DopplerSection)
    classifier: ClassifierSection = Field(default_factory=ClassifierSection)
    evaluation: EvaluationSection = Field(default_factory=EvaluationSection)

    def grid_config(self) -> GridConfig:
        g = self.grid
        spacing = g.antenna_spacing or SPEED_OF_LIGHT / g.carrier_freq / 2
        return GridConfig(g.carrier_freq, g.bandwidth, g.n_subcarriers, g.n_rx_antennas, spacing)

    def schedule(self) -> CaptureSchedule:
        c = self.capture
        return CaptureSchedule.for_duration(c.duration, c.inter_packet_period, c.start_time)

    def impairment_params(self) -> ImpairmentParams:
        return ImpairmentParams(**self.impairments.model_dump())

    def doppler_config(self) -> DopplerConfig:
        return DopplerConfig(**self.doppler.model_dump())

    def training_hyper(self, seed: int = 0) -> TrainingHyper:
        c = self.classifier
        return TrainingHyper(c.learning_rate, c.epochs, c.weight_decay, c.init_scale, seed)

    def ru_list(self) -> List[RuId]:
        return [RuId.parse(name) for name in self.evaluation.rus]

    def sampling_factors(self) -> List[Tuple[int, int]]:
        if self.evaluation.factors is not None:
            return [tuple(f) for f in self.evaluation.factors]
        n = self.classifier.n_vectors
        return [(k, n // k) for k in DEFAULT_FACTORS]

    def campaign_seed(self, label: ActivityClass, campaign: int) -> int:
        """Explicit seed if configured, otherwise derived from base_seed"""
        seeds = self.campaigns.seeds or {}
        explicit = seeds.get(label.value)
        if explicit is not None:
            if campaign >= len(explicit):
                raise ConfigurationError(
                    f"campaigns.seeds.{label.value} lists {len(explicit)} seeds, "
                    f"campaign {campaign} requested"
                )
            return int(explicit[campaign])
        sequence = np.random.SeedSequence([self.campaigns.base_seed, label.index, campaign])
        return int(sequence.generate_state(1, dtype=np.uint32)[0])


def load_config(path: Union[str, Path]) -> RunConfig:
    """Read a TOML or JSON run configuration"""
    path = Path(path)
    try:
        if path.suffix == ".toml":
            with open(path, "rb") as f:
                data = tomllib.load(f)
        elif path.suffix == ".json":
            data = json.loads(path.read_text(encoding="utf-8"))
        else:
            raise ConfigurationError(f"config must be .toml or .json, got {path.name}")
    except (OSError, tomllib.TOMLDecodeError, json.JSONDecodeError) as e:
        raise ConfigurationError(f"unreadable config {path}: {e}") from e

    try:
        config = RunConfig.model_validate(data)
    except ValidationError as e:
        raise ConfigurationError(f"invalid config {path}: {e}") from e
    logger.info("loaded config %s", path)
    return config


def save_config(config: RunConfig, path: Union[str, Path]) -> None:
    Path(path).write_text(config.model_dump_json(indent=2), encoding="utf-8")
