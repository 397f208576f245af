"""
Command protocol interface.

Defines the experiment configuration every command receives and the
result it hands back to the runner.
"""

# Standard library imports
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Protocol

EXIT_PASS = 0
EXIT_ERROR = 1
EXIT_VIOLATION = 2


@dataclass
class ExperimentConfig:
    """
    Everything a command needs; the seed fixes every random draw.

    Attributes:
        command: Subcommand name such as "paths qgfit".
        spec: Manifold spec path.
        seed: Experiment seed.
        samples: Number of random samples.
        radius: Ball or plane radius.
        resolution: Oracle grid spacing.
        out: Report path; None writes nothing.
        fmt: "csv" or "json".
        target: Positional operand (a spec path or a matrix literal).
        word: Word literal.
        lam: Quasi-geodesic constant.
        gens: Generator literals.
        control: Negative control name.
        max_walls: Largest wall count between sampled endpoints.
        steps: Orbit steps on each side of the basepoint.
        contraction: Contraction constant override.
    """

    command: str
    spec: str
    seed: int
    samples: int
    radius: int
    resolution: float
    out: Optional[str] = None
    fmt: str = "json"
    target: Optional[str] = None
    word: Optional[str] = None
    lam: float = 2.0
    gens: List[str] = field(default_factory=list)
    control: Optional[str] = None
    max_walls: int = 8
    steps: int = 4
    contraction: Optional[float] = None


@dataclass
class CommandResult:
    """Exit code and report of one command."""

    exit_code: int
    report: Dict[str, Any]
    rows_key: str = "rows"

    def __repr__(self) -> str:
        return f"CommandResult(exit_code={self.exit_code})"


class CommandProtocol(Protocol):
    """Define the protocol for experiment commands."""

    name: str

    def run(self, config: ExperimentConfig) -> CommandResult:
        """Run the experiment described by config."""
