"""RU and sub-sampling sweeps over the cross-validation protocol.

Each campaign is loaded once; for every sweep configuration its tensor is
projected onto the RU, sanitised, turned into a Doppler stream and cut into
classifier inputs, and only the pooled features are kept. The evaluation
sets then train and score on those cached features.
"""

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np

from wisense_lab.channel.scene import ActivityClass
from wisense_lab.classifier.features import ClassifierInput, feature_matrix
from wisense_lab.classifier.model import TrainingHyper, fit_softmax
from wisense_lab.dsp.doppler import DopplerConfig, DopplerMatrix, doppler_power_matrix
from wisense_lab.dsp.sanitize import sanitize_phase
from wisense_lab.errors import ConfigurationError, InsufficientDataError
from wisense_lab.evaluation.campaigns import Campaign, index_campaigns
from wisense_lab.evaluation.metrics import Summary, compute_metrics, presence_accuracy, summarize
from wisense_lab.evaluation.splits import SUPPORTED_CAMPAIGNS, EvalSet, make_splits
from wisense_lab.ofdma.resource_units import RuId, slice_ru
from wisense_lab.storage.config import RunConfig

logger = logging.getLogger(__name__)

# Inputs are scaled by this fraction of their mean total (static + dynamic) power
RELATIVE_FLOOR = 1e-4

ProgressCallback = Callable[[str, int, int], None]


@dataclass(frozen=True)
class PipelineConfig:
    doppler: DopplerConfig = field(default_factory=DopplerConfig)
    n_vectors: int = 256
    hyper: TrainingHyper = field(default_factory=TrainingHyper)
    n_rounds: int = 9
    seed: int = 0
    workers: int = 1

    @classmethod
    def from_run_config(cls, config: RunConfig) -> "PipelineConfig":
        return cls(
            doppler=config.doppler_config(),
            n_vectors=config.classifier.n_vectors,
            hyper=config.training_hyper(),
            n_rounds=config.evaluation.n_rounds,
            seed=config.evaluation.seed,
            workers=config.evaluation.workers,
        )


@dataclass(frozen=True)
class SweepVariant:
    """One bar group of a sweep: an RU, a decimation factor and an input length"""
    label: str
    ru: RuId
    subsample_factor: int = 1
    n_vectors: int = 256

    def __post_init__(self):
        if self.subsample_factor < 1:
            raise ConfigurationError(f"subsample factor must be >= 1, got {self.subsample_factor}")
        if self.n_vectors < 2:
            raise ConfigurationError(
                f"{self.label}: classifier inputs need at least 2 vectors, got {self.n_vectors}"
            )


@dataclass(frozen=True)
class EvalResult:
    config_label: str
    round_index: int
    test_campaign: int
    validation_campaign: int
    accuracy: float
    macro_f1: float
    presence_accuracy: float

    def to_dict(self) -> Dict[str, Any]:
        return {
            "config_label": self.config_label,
            "round": self.round_index,
            "test_campaign": self.test_campaign,
            "validation_campaign": self.validation_campaign,
            "accuracy": self.accuracy,
            "macro_f1": self.macro_f1,
            "presence_accuracy": self.presence_accuracy,
        }


@dataclass
class SweepReport:
    config_label: str
    results: List[EvalResult] = field(default_factory=list)

    @property
    def accuracies(self) -> List[float]:
        return [r.accuracy for r in self.results]

    @property
    def macro_f1s(self) -> List[float]:
        return [r.macro_f1 for r in self.results]

    @property
    def accuracy_summary(self) -> Summary:
        return summarize(self.accuracies)

    @property
    def f1_summary(self) -> Summary:
        return summarize(self.macro_f1s)

    @property
    def presence_summary(self) -> Summary:
        return summarize([r.presence_accuracy for r in self.results])

    def to_dict(self) -> Dict[str, Any]:
        return {
            "config_label": self.config_label,
            "n_sets": len(self.results),
            "accuracy": self.accuracy_summary.to_dict(),
            "macro_f1": self.f1_summary.to_dict(),
            "presence_accuracy": self.presence_summary.to_dict(),
        }


def build_inputs(
    matrix: DopplerMatrix, n_vectors: int, label: Optional[int] = None
) -> List[ClassifierInput]:
    """Non-overlapping stacks of ``n_vectors`` consecutive Doppler vectors"""
    n_inputs = len(matrix) // n_vectors
    if n_inputs == 0:
        raise InsufficientDataError(
            f"stream of {len(matrix)} Doppler vectors is shorter than one input of {n_vectors}"
        )
    inputs = []
    for i in range(n_inputs):
        rows = slice(i * n_vectors, (i + 1) * n_vectors)
        power = matrix.power[rows]
        reference = float(np.mean(matrix.static_power[rows] + power.sum(axis=1)))
        scale = reference * RELATIVE_FLOOR if reference > 0 else 1.0
        inputs.append(ClassifierInput(power, label, scale))
    return inputs


FeatureKey = Tuple[str, ActivityClass, int]


class FeatureBank:
    """Pooled features per (variant label, class, campaign number)"""

    def __init__(self):
        self._features: Dict[FeatureKey, np.ndarray] = {}

    def __len__(self) -> int:
        return len(self._features)

    def __contains__(self, key: FeatureKey) -> bool:
        return key in self._features

    def add(self, variant: str, campaign: Campaign, features: np.ndarray):
        self._features[(variant, campaign.label, campaign.number)] = features

    def get(self, variant: str, label: ActivityClass, number: int) -> np.ndarray:
        return self._features[(variant, label, number)]

    def dataset(self, variant: str, numbers: Sequence[int]) -> Tuple[np.ndarray, np.ndarray]:
        """Stacked features and class indices of the given campaign numbers, all classes"""
        blocks, labels = [], []
        for label in ActivityClass:
            for number in numbers:
                features = self.get(variant, label, number)
                blocks.append(features)
                labels.append(np.full(features.shape[0], label.index))
        return np.concatenate(blocks), np.concatenate(labels)


def extract_features(
    campaigns: Sequence[Campaign],
    variants: Sequence[SweepVariant],
    pipeline: PipelineConfig,
    bank: Optional[FeatureBank] = None,
    progress: Optional[ProgressCallback] = None,
) -> FeatureBank:
    """Fill ``bank`` with the features of every (variant, campaign) pair not yet in it"""
    bank = bank if bank is not None else FeatureBank()
    for done, campaign in enumerate(campaigns):
        pending = [v for v in variants if (v.label, campaign.label, campaign.number) not in bank]
        if pending:
            cfr = campaign.load()
            sanitized = {}
            for variant in pending:
                if variant.ru not in sanitized:
                    sanitized[variant.ru] = sanitize_phase(slice_ru(cfr, variant.ru))
                matrix = doppler_power_matrix(
                    sanitized[variant.ru], pipeline.doppler, variant.subsample_factor,
                    pipeline.workers,
                )
                inputs = build_inputs(matrix, variant.n_vectors, campaign.label.index)
                bank.add(variant.label, campaign, feature_matrix(inputs))
            del cfr, sanitized
        if progress:
            progress("features", done + 1, len(campaigns))
    return bank


def evaluate_set(
    bank: FeatureBank, variant: str, eval_set: EvalSet, hyper: TrainingHyper
) -> EvalResult:
    train_x, train_y = bank.dataset(variant, eval_set.train)
    val_x, val_y = bank.dataset(variant, [eval_set.validation])
    test_x, test_y = bank.dataset(variant, [eval_set.test])

    model = fit_softmax(train_x, train_y, replace(hyper, seed=eval_set.seed), (val_x, val_y))
    predictions = np.argmax(model.probabilities(test_x), axis=1)
    metrics = compute_metrics(predictions, test_y)
    return EvalResult(
        config_label=variant,
        round_index=eval_set.round_index,
        test_campaign=eval_set.test,
        validation_campaign=eval_set.validation,
        accuracy=metrics.accuracy,
        macro_f1=metrics.macro_f1,
        presence_accuracy=presence_accuracy(predictions, test_y),
    )


def run_sweep(
    campaigns: Sequence[Campaign],
    variants: Sequence[SweepVariant],
    pipeline: PipelineConfig,
    bank: Optional[FeatureBank] = None,
    progress: Optional[ProgressCallback] = None,
) -> List[SweepReport]:
    """One report per variant, each over 12 x n_rounds evaluation sets.

    Sets run on ``pipeline.workers`` threads; every set has its own seed so
    the reports do not depend on the worker count.
    """
    index = index_campaigns(list(campaigns), SUPPORTED_CAMPAIGNS)
    ordered = [index[key] for key in sorted(index, key=lambda k: (k[0].index, k[1]))]
    bank = extract_features(ordered, variants, pipeline, bank, progress)
    sets = make_splits(SUPPORTED_CAMPAIGNS, pipeline.n_rounds, pipeline.seed)

    reports = []
    for done, variant in enumerate(variants):
        logger.info("evaluating %s over %d sets", variant.label, len(sets))

        def run(eval_set: EvalSet) -> EvalResult:
            return evaluate_set(bank, variant.label, eval_set, pipeline.hyper)

        if pipeline.workers > 1:
            with ThreadPoolExecutor(max_workers=pipeline.workers) as pool:
                results = list(pool.map(run, sets))
        else:
            results = [run(s) for s in sets]

        report = SweepReport(variant.label, results)
        logger.info(
            "%s: median accuracy %.3f, median macro-F1 %.3f",
            variant.label, report.accuracy_summary.median, report.f1_summary.median,
        )
        reports.append(report)
        if progress:
            progress("evaluation", done + 1, len(variants))
    return reports


def ru_variants(rus: Optional[Sequence[RuId]], n_vectors: int) -> List[SweepVariant]:
    rus = list(rus) if rus else RuId.all_default()
    return [SweepVariant(ru.name, ru, 1, n_vectors) for ru in rus]


def sampling_variants(
    factors: Optional[Sequence[Tuple[int, int]]], n_vectors: int, ru: Optional[RuId] = None
) -> List[SweepVariant]:
    ru = ru or RuId(1, 996)
    if factors is None:
        factors = [(k, n_vectors // k) for k in range(1, 6)]
    return [SweepVariant(f"k{k}", ru, k, n_k) for k, n_k in factors]


def sweep_ru(
    campaigns: Sequence[Campaign],
    rus: Optional[Sequence[RuId]] = None,
    pipeline: Optional[PipelineConfig] = None,
    progress: Optional[ProgressCallback] = None,
) -> List[SweepReport]:
    """One report per RU, labelled with the RU name"""
    pipeline = pipeline or PipelineConfig()
    return run_sweep(campaigns, ru_variants(rus, pipeline.n_vectors), pipeline, progress=progress)


def sweep_sampling(
    campaigns: Sequence[Campaign],
    factors: Optional[Sequence[Tuple[int, int]]] = None,
    pipeline: Optional[PipelineConfig] = None,
    ru: Optional[RuId] = None,
    progress: Optional[ProgressCallback] = None,
) -> List[SweepReport]:
    """One report per (k, N_k), labelled ``k{k}``; the first is the undecimated reference"""
    pipeline = pipeline or PipelineConfig()
    variants = sampling_variants(factors, pipeline.n_vectors, ru)
    return run_sweep(campaigns, variants, pipeline, progress=progress)
