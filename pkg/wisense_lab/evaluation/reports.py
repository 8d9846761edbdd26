"""Sweep report files: one CSV row per evaluation set and a JSON summary."""

import json
import logging
from pathlib import Path
from typing import Sequence, Union

import pandas as pd

from wisense_lab.evaluation.sweeps import SweepReport

logger = logging.getLogger(__name__)

REPORT_COLUMNS = ["config_label", "round", "test_campaign", "accuracy", "macro_f1"]


def reports_frame(reports: Sequence[SweepReport]) -> pd.DataFrame:
    rows = [result.to_dict() for report in reports for result in report.results]
    return pd.DataFrame(rows, columns=list(rows[0]) if rows else REPORT_COLUMNS)


def write_report_csv(reports: Sequence[SweepReport], path: Union[str, Path]) -> Path:
    """Fixed columns; floats use the shortest representation that parses back exactly"""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    reports_frame(reports)[REPORT_COLUMNS].to_csv(path, index=False)
    logger.info("report written: %s", path)
    return path


def summary_payload(reports: Sequence[SweepReport]) -> dict:
    return {"configs": [report.to_dict() for report in reports]}


def write_summary_json(reports: Sequence[SweepReport], path: Union[str, Path]) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(summary_payload(reports), indent=2), encoding="utf-8")
    logger.info("summary written: %s", path)
    return path
