"""
Unit tests for the YAML configuration loader.
"""

import os
from pathlib import Path

import pytest

from core.config_loader import get_config_value, parse_config_value


@pytest.fixture
def config_path(tmp_path: Path) -> str:
    """Write a small configuration file."""
    path = tmp_path / "config.yaml"
    path.write_text(
        "default_seed: 7\n"
        "verbose: 'yes'\n"
        "quiet: 'no'\n"
        "default_spec: data/two_piece_wedge.json\n",
        encoding="utf-8",
    )
    return str(path)


def test_reads_values(config_path: str) -> None:
    assert get_config_value(config_path, "default_seed") == 7
    assert get_config_value(config_path, "verbose") is True
    assert get_config_value(config_path, "quiet") is False


def test_missing_key_returns_default(config_path: str) -> None:
    assert get_config_value(config_path, "absent", default=3) == 3


def test_missing_file_returns_default(tmp_path: Path) -> None:
    missing = str(tmp_path / "nowhere.yaml")
    assert get_config_value(missing, "default_seed", default=11) == 11


def test_relative_spec_paths_become_absolute(config_path: str) -> None:
    value = get_config_value(config_path, "default_spec")
    assert os.path.isabs(value)
    assert value.endswith(os.path.join("data", "two_piece_wedge.json"))


def test_parse_config_value_leaves_other_values_alone() -> None:
    assert parse_config_value(0.25) == 0.25
    assert parse_config_value("1/2") == "1/2"
    assert parse_config_value("/abs/spec.json") == "/abs/spec.json"
