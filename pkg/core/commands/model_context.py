"""
Model context.

Loads the spec named by an ExperimentConfig and wires the model objects
with the tunables from the YAML configuration.
"""

# Standard library imports
from dataclasses import dataclass
from fractions import Fraction

# Local project imports
from config.settings import CONFIG_FILE_PATH
from core.commands.protocols import ExperimentConfig
from core.config_loader import get_config_value
from core.geometry.distance_oracle import DistanceOracle
from core.geometry.flip_complex import FlipComplex, PointCoord
from core.geometry.point_sampler import PointSampler
from core.geometry.ps_contraction import ContractionAnalyzer
from core.geometry.spec_loader import FlipManifoldSpec, load_spec_file
from core.geometry.special_paths import SpecialPathSystem
from core.geometry.spine_tree import TreePoint


@dataclass
class ModelContext:
    """A loaded spec and the objects built on it."""

    spec: FlipManifoldSpec
    complex: FlipComplex
    paths: SpecialPathSystem
    oracle: DistanceOracle
    sampler: PointSampler
    analyzer: ContractionAnalyzer

    def __repr__(self) -> str:
        return f"ModelContext({self.spec!r})"

    @property
    def basepoint(self) -> PointCoord:
        """Base vertex of the root copy at fiber 0."""
        return PointCoord(self.complex.root, TreePoint(()), Fraction(0))


def config_value(key: str, default: object) -> object:
    """Shorthand for a value of the project configuration."""
    return get_config_value(CONFIG_FILE_PATH, key, default=default)


def load_spec_for(config: ExperimentConfig) -> FlipManifoldSpec:
    """Load the spec path of config with the configured collar fraction."""
    fraction = Fraction(str(config_value("collar_fraction", "1/2")))
    return load_spec_file(config.spec, fraction)


def build_context(config: ExperimentConfig) -> ModelContext:
    """
    Build the model for config.

    Raises:
        SpecParseError: If the spec is not valid JSON or breaks the schema.
        SpecValidationError: If the spec violates a structural invariant.
        OSError: If the spec file cannot be read.
    """
    spec = load_spec_for(config)
    complex_ = FlipComplex(
        spec, int(str(config_value("coset_search_bound", 12)))
    )
    paths = SpecialPathSystem(
        complex_, int(str(config_value("rho_radius", 4)))
    )
    oracle = DistanceOracle(
        paths,
        window_factor=float(str(config_value("oracle_window_factor", 4))),
        coarse_cells=int(str(config_value("oracle_coarse_cells", 16))),
        max_walls=int(str(config_value("oracle_max_walls", 12))),
        max_nodes_per_wall=int(
            str(config_value("oracle_max_nodes_per_wall", 2500))
        ),
    )
    sampler = PointSampler(
        complex_,
        fiber_range=int(str(config_value("sample_fiber_range", 3))),
        base_radius=int(str(config_value("sample_base_radius", 3))),
        copy_depth=int(str(config_value("sample_copy_depth", 2))),
    )
    analyzer = ContractionAnalyzer(
        paths,
        oracle,
        sampler,
        resolution=config.resolution,
        spacing=float(str(config_value("segment_spacing", 0.25))),
    )
    return ModelContext(spec, complex_, paths, oracle, sampler, analyzer)
