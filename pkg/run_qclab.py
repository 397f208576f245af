"""
Run a qclab experiment.

Parses the command line, runs the experiment and exits with its code.
"""

import sys

from core.logger import logger
from runner.experiment_runner import main

if __name__ == "__main__":
    try:
        sys.exit(main())
    except KeyboardInterrupt:
        logger.info("Experiment interrupted by user.")
        sys.exit(1)
