"""
Shared fixtures: the bundled manifold specs and the models built on them.
"""

import json
from pathlib import Path
from typing import Any, Callable, Dict

import pytest

from core.geometry.flip_complex import FlipComplex
from core.geometry.spec_loader import FlipManifoldSpec, load_spec_file
from core.geometry.special_paths import SpecialPathSystem

DATA_DIR = Path(__file__).resolve().parent.parent / "data"
TWO_PIECE = DATA_DIR / "two_piece_wedge.json"
SELF_GLUED = DATA_DIR / "self_glued_wedge.json"


@pytest.fixture
def two_piece_spec() -> FlipManifoldSpec:
    """Two wedge-of-circles pieces glued along their commutator cycles."""
    return load_spec_file(str(TWO_PIECE))


@pytest.fixture
def self_glued_spec() -> FlipManifoldSpec:
    """One piece whose two boundary cycles are glued to each other."""
    return load_spec_file(str(SELF_GLUED))


@pytest.fixture
def two_piece_complex(two_piece_spec: FlipManifoldSpec) -> FlipComplex:
    return FlipComplex(two_piece_spec)


@pytest.fixture
def two_piece_paths(two_piece_complex: FlipComplex) -> SpecialPathSystem:
    return SpecialPathSystem(two_piece_complex)


@pytest.fixture
def raw_two_piece() -> Dict[str, Any]:
    """Editable copy of the two-piece spec document."""
    return json.loads(TWO_PIECE.read_text(encoding="utf-8"))


@pytest.fixture
def spec_file(tmp_path: Path) -> Callable[[Dict[str, Any]], str]:
    """Write a spec document to a temporary file and return its path."""

    def _write(document: Dict[str, Any], name: str = "spec.json") -> str:
        path = tmp_path / name
        path.write_text(json.dumps(document), encoding="utf-8")
        return str(path)

    return _write
