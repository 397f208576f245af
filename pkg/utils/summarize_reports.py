"""
Report summaries.

Collects the JSON reports of a results directory into one table,
aggregates pass rates per command and summarises quasi-geodesic fits
and oracle benchmark timings by wall count.
"""

import glob
import json
import os
from typing import Any, Dict, List

import pandas as pd

from config.settings import CONFIG_FILE_PATH
from core.config_loader import get_config_value
from core.logger import logger

SCALARS = (str, int, float, bool, type(None))


def load_reports(results_dir: str) -> pd.DataFrame:
    """
    Read every JSON report under results_dir.

    Nested values are dropped; each report becomes one row with its
    file name in the "report" column.

    Args:
        results_dir (str): Directory holding *.json reports.

    Returns:
        pd.DataFrame: One row per readable report, sorted by file name.
    """
    rows: List[Dict[str, Any]] = []
    for path in sorted(glob.glob(os.path.join(results_dir, "*.json"))):
        try:
            with open(path, "r", encoding="utf-8") as handle:
                report = json.load(handle)
        except (OSError, json.JSONDecodeError) as e:
            logger.warning("Skipping %s: %s", path, e)
            continue
        if not isinstance(report, dict):
            continue
        row = {
            key: value
            for key, value in report.items()
            if isinstance(value, SCALARS)
        }
        row["report"] = os.path.basename(path)
        rows.append(row)
    return pd.DataFrame(rows)


def pass_rates(df: pd.DataFrame) -> pd.DataFrame:
    """Number of reports and fraction passed for each command."""
    if df.empty or "command" not in df or "passed" not in df:
        return pd.DataFrame(columns=["command", "reports", "pass_rate"])
    passed = df["passed"].eq(True).groupby(df["command"])
    summary = passed.agg(["size", "mean"]).reset_index()
    return summary.rename(columns={"size": "reports", "mean": "pass_rate"})


def qgfit_summary(csv_path: str) -> pd.DataFrame:
    """
    Per wall count summary of a "paths qgfit" CSV report.

    Returns:
        pd.DataFrame: Columns walls, pairs, mean_ratio, worst_ratio and
        kappa, one row per wall count present in the report.
    """
    df = pd.read_csv(csv_path)
    summary = df.groupby("walls").agg(
        pairs=("ratio", "size"),
        mean_ratio=("ratio", "mean"),
        worst_ratio=("ratio", "max"),
        kappa=("kappa", "max"),
    )
    return summary.reset_index()


def oracle_timings(csv_path: str) -> pd.DataFrame:
    """Average oracle time by wall count (rows) and resolution."""
    df = pd.read_csv(csv_path)
    return df.pivot_table(
        index="Max Walls",
        columns="Resolution",
        values="Avg Time (ms)",
        aggfunc="mean",
    )


if __name__ == "__main__":
    RESULTS_DIR = str(
        get_config_value(CONFIG_FILE_PATH, "results_dir", default="results")
    )
    print(pass_rates(load_reports(RESULTS_DIR)).to_string(index=False))
    QGFIT_CSV = os.path.join(RESULTS_DIR, "qgfit.csv")
    if os.path.exists(QGFIT_CSV):
        print(qgfit_summary(QGFIT_CSV).to_string(index=False))
    BENCHMARK_CSV = os.path.join(RESULTS_DIR, "oracle_benchmark_results.csv")
    if os.path.exists(BENCHMARK_CSV):
        print(oracle_timings(BENCHMARK_CSV).to_string())
