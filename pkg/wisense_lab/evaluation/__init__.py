# Evaluation harness module
from .campaigns import (
    Campaign,
    index_campaigns,
    load_campaigns,
    plan_campaigns,
    simulate_campaign,
    write_campaigns,
)
from .metrics import Metrics, Summary, compute_metrics, presence_accuracy, summarize
from .reports import reports_frame, write_report_csv, write_summary_json
from .splits import EvalSet, make_splits
from .sweeps import (
    EvalResult,
    FeatureBank,
    PipelineConfig,
    SweepReport,
    SweepVariant,
    build_inputs,
    extract_features,
    run_sweep,
    sweep_ru,
    sweep_sampling,
)

__all__ = [
    "Campaign",
    "index_campaigns",
    "load_campaigns",
    "plan_campaigns",
    "simulate_campaign",
    "write_campaigns",
    "Metrics",
    "Summary",
    "compute_metrics",
    "presence_accuracy",
    "summarize",
    "reports_frame",
    "write_report_csv",
    "write_summary_json",
    "EvalSet",
    "make_splits",
    "EvalResult",
    "FeatureBank",
    "PipelineConfig",
    "SweepReport",
    "SweepVariant",
    "build_inputs",
    "extract_features",
    "run_sweep",
    "sweep_ru",
    "sweep_sampling",
]
