"""
Unit tests for report rendering.
"""

import csv
import io
import json
from fractions import Fraction
from pathlib import Path

import numpy as np
import pytest

from core.report_writer import render_csv, render_json, to_plain, write_report


def test_to_plain_renders_exact_values() -> None:
    assert to_plain(Fraction(3, 8)) == "3/8"
    assert to_plain(Fraction(4, 2)) == 2
    assert to_plain((Fraction(1, 2), {"k": None})) == ["1/2", {"k": None}]
    assert to_plain(np.int64(5)) == 5


def test_json_is_sorted_and_stable() -> None:
    text = render_json({"b": 1, "a": Fraction(1, 3)})
    assert text.endswith("\n")
    assert list(json.loads(text)) == ["a", "b"]
    assert text == render_json({"a": Fraction(1, 3), "b": 1})


def test_csv_header_is_the_union_of_keys() -> None:
    text = render_csv([{"x": 1}, {"y": [1, 2], "x": Fraction(1, 2)}])
    rows = list(csv.DictReader(io.StringIO(text)))
    assert list(rows[0]) == ["x", "y"]
    assert rows[1]["x"] == "1/2"
    assert json.loads(rows[1]["y"]) == [1, 2]
    assert rows[0]["y"] == ""


def test_csv_respects_explicit_columns() -> None:
    text = render_csv([{"x": 1, "y": 2}], columns=["y"])
    assert text.splitlines() == ["y", "2"]


def test_write_report_creates_directories(tmp_path: Path) -> None:
    out = tmp_path / "nested" / "report.json"
    text = write_report({"passed": True}, str(out))
    assert out.read_text(encoding="utf-8") == text
    assert json.loads(text) == {"passed": True}


def test_rowless_report_becomes_one_csv_row() -> None:
    text = write_report({"passed": False, "rows": []}, None, "csv")
    assert text.splitlines() == ["passed", "False"]


def test_rows_key_selects_the_csv_rows() -> None:
    report = {"command": "x", "pieces": [{"index": 0}, {"index": 1}]}
    text = write_report(report, None, "csv", rows_key="pieces")
    assert text.splitlines() == ["index", "0", "1"]


def test_unknown_format_is_rejected() -> None:
    with pytest.raises(ValueError):
        write_report({}, None, "xml")
