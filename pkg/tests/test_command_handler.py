"""
Unit tests for the command registry and handler.
"""

import json
from pathlib import Path
from typing import List, Type
from unittest.mock import patch

import pytest

from core.algebra.graph_of_groups import GraphOfGroups, QIReport
from core.command_handler import COMMAND_CLASSES, CommandHandler
from core.commands.orbit_qi import relative_spread
from core.commands.protocols import (
    EXIT_ERROR,
    EXIT_PASS,
    EXIT_VIOLATION,
    CommandProtocol,
    ExperimentConfig,
)
from core.errors import UsageError

DATA_DIR = Path(__file__).resolve().parent.parent / "data"
TWO_PIECE = DATA_DIR / "two_piece_wedge.json"


def make_config(command: str, **overrides: object) -> ExperimentConfig:
    """A small, fast configuration for command."""
    values = {
        "command": command,
        "spec": str(TWO_PIECE),
        "seed": 1,
        "samples": 0,
        "radius": 2,
        "resolution": 0.5,
    }
    values.update(overrides)
    return ExperimentConfig(**values)  # type: ignore[arg-type]


@pytest.mark.parametrize("name, command_class", COMMAND_CLASSES.items())
def test_registry_names_match(
    name: str, command_class: Type[CommandProtocol]
) -> None:
    assert command_class.name == name


def test_unknown_command_is_a_usage_error() -> None:
    with pytest.raises(UsageError):
        CommandHandler(make_config("paths teleport"))


def test_model_validate_passes() -> None:
    result, text = CommandHandler(make_config("model validate")).handle()
    assert result.exit_code == EXIT_PASS
    report = json.loads(text)
    assert report["valid"] is True
    assert len(report["pieces"]) == 2
    assert report["pieces"][0]["collar_width"] == "1/8"


def test_plane_control_violates_contraction() -> None:
    config = make_config("contract test", control="plane")
    result, _ = CommandHandler(config).handle()
    assert result.exit_code == EXIT_VIOLATION
    assert result.report["passed"] is False
    assert "witness" in result.report


def test_contraction_without_far_pairs_is_inconclusive() -> None:
    config = make_config("contract test", control="plane", contraction=10.0)
    result, _ = CommandHandler(config).handle()
    assert result.exit_code == EXIT_ERROR
    assert result.report["checked_pairs"] == 0
    assert result.report["vacuous"] is True
    assert result.report["inconclusive"] is True


def test_morse_axis_contraction_is_conclusive() -> None:
    result, _ = CommandHandler(make_config("contract test")).handle()
    assert result.exit_code == EXIT_PASS
    assert result.report["passed"] is True
    assert result.report["checked_pairs"] >= 1
    assert result.report["steps"] >= 4


def test_unknown_control_is_a_usage_error() -> None:
    config = make_config("contract test", control="sphere")
    with pytest.raises(UsageError):
        CommandHandler(config).handle()


def test_abc_analyze_through_the_handler(tmp_path: Path) -> None:
    out = tmp_path / "abc.json"
    config = make_config(
        "abc analyze",
        target="2 1 1 1",
        gens=["1:0,0"],
        out=str(out),
    )
    result, text = CommandHandler(config).handle()
    assert result.exit_code == EXIT_PASS
    assert out.read_text(encoding="utf-8") == text
    report = json.loads(text)
    assert report["periodic_order"] is None
    assert report["classification"]["kind"] == "candidate-finite-height"
    assert report["sq_classification"] == "not-strongly-quasiconvex"


def test_abc_analyze_needs_a_matrix() -> None:
    with pytest.raises(UsageError):
        CommandHandler(make_config("abc analyze")).handle()


def test_abc_ball_with_explicit_conjugators() -> None:
    config = make_config(
        "abc ball", target="2 1 1 1", gens=["1:0,0", "0:1,0", "1:0,0"]
    )
    result, _ = CommandHandler(config).handle()
    assert result.exit_code == EXIT_PASS
    rows = result.report["rows"]
    assert rows[0]["hits"] == []
    assert rows[1]["in_subgroup"] is True
    assert len(rows[1]["hits"]) == 4
    assert result.report["malnormal"] is True
    assert result.report["height_bound"] == 1


def test_abc_ball_allows_hits_above_exponent_one() -> None:
    config = make_config(
        "abc ball", target="2 1 1 1", gens=["2:0,0", "1:0,0", "3:0,0"]
    )
    result, _ = CommandHandler(config).handle()
    assert result.exit_code == EXIT_PASS
    assert result.report["passed"] is True
    assert result.report["malnormal"] is False
    assert result.report["height_bound"] == 2
    for row in result.report["rows"]:
        assert row["in_subgroup"] is False
        assert row["hits"] == [-2, -1, 1, 2]


def test_morse_classify_a_given_word() -> None:
    config = make_config(
        "morse classify", word="v0: a ; t0 ; v1: a ; t0^-1"
    )
    result, _ = CommandHandler(config).handle()
    assert result.exit_code == EXIT_PASS
    (row,) = result.report["rows"]
    assert row["morse"] is True
    assert row["translation_length"] == 2


def test_orbit_qi_of_one_morse_generator() -> None:
    config = make_config(
        "orbit qi", gens=["v0: a ; t0 ; v1: a ; t0^-1"], radius=2
    )
    result, _ = CommandHandler(config).handle()
    assert result.exit_code == EXIT_PASS
    assert result.report["free_basis"] is True
    assert result.report["samples"] == 5
    assert [fit["radius"] for fit in result.report["fits"]] == [2, 4, 6]
    assert result.report["stable"] is True
    assert result.report["spread_L"] < 0.2


def test_orbit_qi_flags_a_drifting_fit() -> None:
    fits = [
        QIReport(1.0, 0.0, 2, 5),
        QIReport(2.0, 0.0, 4, 9),
        QIReport(3.0, 0.0, 6, 13),
    ]
    config = make_config(
        "orbit qi", gens=["v0: a ; t0 ; v1: a ; t0^-1"], radius=2
    )
    with patch.object(GraphOfGroups, "orbit_qi_fits", return_value=fits):
        result, _ = CommandHandler(config).handle()
    assert result.exit_code == EXIT_VIOLATION
    assert result.report["stable"] is False
    assert result.report["spread_L"] == pytest.approx(2 / 3)
    assert result.report["witness"]["reason"] == "fit varies across radii"


@pytest.mark.parametrize(
    "values, floor, expected",
    [([2.0, 2.0], 0.0, 0.0), ([1.0, 2.0], 0.0, 0.5), ([0.0, 0.5], 1.0, 0.5)],
)
def test_relative_spread(
    values: List[float], floor: float, expected: float
) -> None:
    assert relative_spread(values, floor) == pytest.approx(expected)


def test_orbit_qi_flags_a_vertex_generator() -> None:
    config = make_config("orbit qi", gens=["v0: a"])
    result, _ = CommandHandler(config).handle()
    assert result.exit_code == EXIT_VIOLATION
    assert "witness" in result.report


def test_slide_audit_finds_no_lengthening() -> None:
    config = make_config("slide audit", samples=5, seed=3)
    result, _ = CommandHandler(config).handle()
    assert result.exit_code == EXIT_PASS
    assert len(result.report["rows"]) == 5
