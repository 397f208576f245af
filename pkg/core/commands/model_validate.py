"""
Model validate command.

Loads a manifold spec, builds its model and reports the boundary data
and the estimated wall separation.
"""

# Local project imports
from core.commands.model_context import build_context, config_value
from core.commands.protocols import (
    EXIT_PASS,
    CommandProtocol,
    CommandResult,
    ExperimentConfig,
)
from core.logger import logger


class ModelValidateCommand(CommandProtocol):
    """Validate a spec; any spec error surfaces as an exception."""

    name = "model validate"

    def __repr__(self) -> str:
        return "ModelValidateCommand()"

    def run(self, config: ExperimentConfig) -> CommandResult:
        context = build_context(config)
        estimate = context.complex.rho_details(
            int(str(config_value("rho_radius", 4)))
        )
        pieces = [
            {
                "index": index,
                "vertices": piece.vertices,
                "edges": len(piece.edges),
                "boundary_cycles": len(piece.boundary_cycles),
                "base_scale": piece.base_scale,
                "fiber_period": piece.fiber_period,
                "collar_width": piece.collar_width,
            }
            for index, piece in enumerate(context.spec.pieces)
        ]
        gluings = [
            {
                "from": list(gluing.source),
                "to": list(gluing.target),
                "offsets": list(gluing.offsets),
            }
            for gluing in context.spec.gluings
        ]
        logger.info("Spec %s is valid, rho %s", config.spec, estimate.rho)
        return CommandResult(
            EXIT_PASS,
            {
                "command": self.name,
                "spec": config.spec,
                "valid": True,
                "pieces": pieces,
                "gluings": gluings,
                "rho": estimate.rho,
                "rho_radius": estimate.radius,
            },
            rows_key="pieces",
        )
