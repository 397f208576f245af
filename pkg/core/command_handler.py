"""
Command handler module.

Maps subcommand names to command classes, runs the selected command,
writes its report and logs the execution time.
"""

# Standard library imports
import time
from typing import Dict, Tuple, Type

# Core module imports
from core.logger import logger
from core.report_writer import write_report
from core.errors import UsageError

# Command imports
from core.commands.protocols import (
    CommandProtocol,
    CommandResult,
    ExperimentConfig,
)
from core.commands.model_validate import ModelValidateCommand
from core.commands.paths_sample import PathsSampleCommand
from core.commands.paths_qgfit import PathsQGFitCommand
from core.commands.slide_audit import SlideAuditCommand
from core.commands.contract_test import ContractTestCommand
from core.commands.contract_radius import ContractRadiusCommand
from core.commands.morse_classify import MorseClassifyCommand
from core.commands.orbit_qi import OrbitQICommand
from core.commands.abc_analyze import AbcAnalyzeCommand
from core.commands.abc_ball import AbcBallCommand

# Mapping of subcommand names to classes.
COMMAND_CLASSES: Dict[str, Type[CommandProtocol]] = {
    "model validate": ModelValidateCommand,
    "paths sample": PathsSampleCommand,
    "paths qgfit": PathsQGFitCommand,
    "slide audit": SlideAuditCommand,
    "contract test": ContractTestCommand,
    "contract radius": ContractRadiusCommand,
    "morse classify": MorseClassifyCommand,
    "orbit qi": OrbitQICommand,
    "abc analyze": AbcAnalyzeCommand,
    "abc ball": AbcBallCommand,
}


class CommandHandler:
    """
    Run one experiment command.

    Resolves the command class, executes it and emits its report.
    """

    def __init__(self, config: ExperimentConfig) -> None:
        command_class = COMMAND_CLASSES.get(config.command)
        if command_class is None:
            raise UsageError(
                f"unknown command {config.command!r}; choose one of "
                + ", ".join(sorted(COMMAND_CLASSES))
            )
        self.config = config
        self.command: CommandProtocol = command_class()

    def __repr__(self) -> str:
        return f"CommandHandler({self.config.command!r})"

    def _execute(self) -> Tuple[CommandResult, float]:
        """Run the command and return its result with execution time."""
        start_time = time.time()
        result = self.command.run(self.config)
        return result, time.time() - start_time

    def handle(self) -> Tuple[CommandResult, str]:
        """
        Run the command and write its report.

        Returns:
            Tuple[CommandResult, str]: Exit code and report, and the
            rendered report text.
        """
        result, exec_time = self._execute()
        text = write_report(
            result.report, self.config.out, self.config.fmt, result.rows_key
        )
        logger.debug(
            "Command: %s, Seed: %s, Exit: %s, Execution Time: %.6f seconds",
            self.config.command,
            self.config.seed,
            result.exit_code,
            exec_time,
        )
        return result, text
