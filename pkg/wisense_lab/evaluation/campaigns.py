"""Measurement campaigns: one activity class, one seed, one capture."""

import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Dict, List, Optional, Tuple

import numpy as np

from wisense_lab.channel.grid import CfrTensor
from wisense_lab.channel.impairments import add_noise, apply_impairments
from wisense_lab.channel.scene import ActivityClass, generate_activity_scene
from wisense_lab.channel.synthesis import synthesize_cfr
from wisense_lab.errors import (
    ConfigurationError,
    DegenerateDatasetError,
    EmptyInputError,
    UnsupportedProtocolError,
)
from wisense_lab.storage.capture import CaptureMeta, read_capture, read_header, write_capture
from wisense_lab.storage.config import RunConfig

logger = logging.getLogger(__name__)

CAPTURE_SUFFIX = ".wslb"


def _child_seeds(seed: int, n: int) -> List[int]:
    return [
        int(s.generate_state(1, dtype=np.uint32)[0])
        for s in np.random.SeedSequence(seed).spawn(n)
    ]


def simulate_campaign(config: RunConfig, label: ActivityClass, seed: int) -> CfrTensor:
    """Scene -> CFR -> impairments -> noise, each stage on its own child seed.

    The result is stored as complex64, the precision of capture files.
    """
    scene_seed, impairment_seed, noise_seed = _child_seeds(seed, 3)
    schedule = config.schedule()
    scene = generate_activity_scene(label, schedule.duration, scene_seed)
    cfr = synthesize_cfr(scene, config.grid_config(), schedule)
    cfr = apply_impairments(cfr, config.impairment_params(), impairment_seed)
    if config.noise.snr_db is not None:
        cfr = add_noise(cfr, config.noise.snr_db, noise_seed)
    return cfr.with_data(cfr.data.astype(np.complex64))


@dataclass(eq=False)
class Campaign:
    """A campaign backed by an in-memory tensor, a capture file or a run config.

    ``load`` materialises the tensor on demand so large campaign sets never
    have to sit in memory together.
    """
    label: ActivityClass
    number: int
    seed: int
    cfr: Optional[CfrTensor] = None
    path: Optional[Path] = None
    config: Optional[RunConfig] = None

    def __post_init__(self):
        if self.cfr is None and self.path is None and self.config is None:
            raise ConfigurationError(f"campaign {self.campaign_id} has no data source")

    @property
    def campaign_id(self) -> str:
        return f"{self.label.value}-{self.number}"

    @property
    def key(self) -> Tuple[ActivityClass, int]:
        return self.label, self.number

    @property
    def duration(self) -> Optional[float]:
        if self.cfr is not None:
            return self.cfr.schedule.duration
        if self.path is not None:
            return read_header(self.path)[1].duration
        return self.config.schedule().duration

    def load(self) -> CfrTensor:
        if self.cfr is not None:
            return self.cfr
        if self.path is not None:
            return read_capture(self.path)[0]
        logger.info("synthesising campaign %s (seed %d)", self.campaign_id, self.seed)
        return simulate_campaign(self.config, self.label, self.seed)

    def meta(self) -> CaptureMeta:
        return CaptureMeta(self.label, self.number, self.seed)


def plan_campaigns(config: RunConfig) -> List[Campaign]:
    """Lazy campaigns for every class and campaign number of ``config``"""
    return [
        Campaign(label, number, config.campaign_seed(label, number), config=config)
        for label in ActivityClass
        for number in range(config.campaigns.n_campaigns)
    ]


def capture_filename(label: ActivityClass, number: int) -> str:
    return f"{label.value}-{number}{CAPTURE_SUFFIX}"


def write_campaigns(campaigns: List[Campaign], out_dir: Path) -> List[Path]:
    """Write every campaign as ``<label>-<n>.wslb``, one at a time"""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    paths = []
    for campaign in campaigns:
        path = out_dir / capture_filename(campaign.label, campaign.number)
        write_capture(path, campaign.load(), campaign.meta())
        paths.append(path)
    return paths


def load_campaigns(capture_dir: Path) -> List[Campaign]:
    """File-backed campaigns for every capture in ``capture_dir``, sorted by class and number"""
    paths = sorted(Path(capture_dir).glob(f"*{CAPTURE_SUFFIX}"))
    if not paths:
        raise EmptyInputError(f"no {CAPTURE_SUFFIX} captures in {capture_dir}")
    campaigns = []
    for path in paths:
        meta = read_header(path)[2]
        campaigns.append(Campaign(meta.label, meta.campaign, meta.seed, path=path))
    campaigns.sort(key=lambda c: (c.label.index, c.number))
    return campaigns


def index_campaigns(
    campaigns: List[Campaign], n_campaigns: int = 4
) -> Dict[Tuple[ActivityClass, int], Campaign]:
    """Check the campaign set covers every class with numbers 0..n-1 and index it"""
    index: Dict[Tuple[ActivityClass, int], Campaign] = {}
    for campaign in campaigns:
        if campaign.key in index:
            raise UnsupportedProtocolError(f"duplicate campaign {campaign.campaign_id}")
        index[campaign.key] = campaign
    for label in ActivityClass:
        numbers = sorted(n for (lbl, n) in index if lbl is label)
        if not numbers:
            raise DegenerateDatasetError(f"no campaigns of class {label.value}")
        if numbers != list(range(n_campaigns)):
            raise UnsupportedProtocolError(
                f"class {label.value} has campaigns {numbers}, expected 0..{n_campaigns - 1}"
            )
    return index
