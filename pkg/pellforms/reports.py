"""
Tabular summaries and saved reports for verification records
"""
import logging
import os
from datetime import datetime
from typing import Dict, List, Sequence

import pandas as pd

from pellforms.workflow import VerificationRecord

logger = logging.getLogger(__name__)

COLUMNS = ["degree", "branch", "reading", "k", "r", "m", "norm", "expected_norm",
           "verdict", "residual", "known_erratum"]


def records_frame(records: Sequence[VerificationRecord]) -> pd.DataFrame:
    """One row per record; rationals as p/q text"""
    rows = [record.model_dump(mode="json", include=set(COLUMNS)) for record in records]
    return pd.DataFrame(rows, columns=COLUMNS)


def summary(frame: pd.DataFrame) -> pd.DataFrame:
    """Verdict counts per (degree, branch, reading)"""
    if frame.empty:
        return pd.DataFrame(columns=["degree", "branch", "reading", "verified", "failed", "undefined"])
    counts = (
        frame.groupby(["degree", "branch", "reading", "verdict"], sort=False)
        .size()
        .unstack("verdict", fill_value=0)
    )
    for column in ("verified", "failed", "undefined"):
        if column not in counts.columns:
            counts[column] = 0
    return counts[["verified", "failed", "undefined"]].reset_index()


def save_report(records: Sequence[VerificationRecord], report_dir: str) -> Dict[str, str]:
    """Write grid_<timestamp>.jsonl and .csv; return both paths"""
    os.makedirs(report_dir, exist_ok=True)
    stamp = datetime.now().strftime("%Y%m%d_%H%M%S")
    base = os.path.join(report_dir, f"grid_{stamp}")

    jsonl_path = base + ".jsonl"
    with open(jsonl_path, 'w') as f:
        for record in records:
            f.write(record.model_dump_json(exclude_none=True) + "\n")

    csv_path = base + ".csv"
    records_frame(records).to_csv(csv_path, index=False)
    logger.info(f"Report saved to: {jsonl_path}")
    return {"jsonl": jsonl_path, "csv": csv_path}


def load_report(jsonl_path: str) -> List[VerificationRecord]:
    with open(jsonl_path, 'r') as f:
        return [VerificationRecord.model_validate_json(line) for line in f if line.strip()]
