"""
Unit tests for the report summaries.
"""

import json
from pathlib import Path

import pytest

from utils.summarize_reports import (
    load_reports,
    oracle_timings,
    pass_rates,
    qgfit_summary,
)


@pytest.fixture
def results_dir(tmp_path: Path) -> str:
    """Three reports of two commands and one unreadable file."""
    reports = {
        "a.json": {"command": "abc ball", "passed": True, "rows": [1]},
        "b.json": {"command": "abc ball", "passed": False, "seed": 2},
        "c.json": {"command": "slide audit", "passed": True},
    }
    for name, report in reports.items():
        (tmp_path / name).write_text(json.dumps(report), encoding="utf-8")
    (tmp_path / "broken.json").write_text("{", encoding="utf-8")
    return str(tmp_path)


def test_load_reports_keeps_scalar_fields(results_dir: str) -> None:
    df = load_reports(results_dir)
    assert list(df["report"]) == ["a.json", "b.json", "c.json"]
    assert "rows" not in df.columns


def test_pass_rates_per_command(results_dir: str) -> None:
    summary = pass_rates(load_reports(results_dir)).set_index("command")
    assert summary.loc["abc ball", "reports"] == 2
    assert summary.loc["abc ball", "pass_rate"] == pytest.approx(0.5)
    assert summary.loc["slide audit", "pass_rate"] == pytest.approx(1.0)


def test_pass_rates_of_an_empty_directory(tmp_path: Path) -> None:
    assert pass_rates(load_reports(str(tmp_path))).empty


def test_oracle_timings_pivot(tmp_path: Path) -> None:
    path = tmp_path / "bench.csv"
    path.write_text(
        "Max Walls,Resolution,Avg Time (ms),Memory (MB),Budget Failures\n"
        "0,0.5,1.0,0.0,0\n"
        "0,0.25,3.0,0.0,0\n"
        "2,0.5,5.0,0.1,1\n",
        encoding="utf-8",
    )
    table = oracle_timings(str(path))
    assert table.loc[0, 0.25] == pytest.approx(3.0)
    assert table.loc[2, 0.5] == pytest.approx(5.0)


def test_qgfit_summary_groups_by_wall_count(tmp_path: Path) -> None:
    path = tmp_path / "qgfit.csv"
    path.write_text(
        "kappa,ratio,walls\n"
        "1.0,1.0,0\n"
        "1.2,1.5,1\n"
        "1.1,1.25,1\n",
        encoding="utf-8",
    )
    summary = qgfit_summary(str(path)).set_index("walls")
    assert list(summary.index) == [0, 1]
    assert summary.loc[1, "pairs"] == 2
    assert summary.loc[1, "mean_ratio"] == pytest.approx(1.375)
    assert summary.loc[1, "worst_ratio"] == pytest.approx(1.5)
    assert summary.loc[1, "kappa"] == pytest.approx(1.2)
