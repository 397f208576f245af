"""
Logger configuration module.

Sets up logging with a predefined format. The level comes from the
QCLAB_LOG_LEVEL environment variable and defaults to INFO.
"""

import logging
import os


logging.basicConfig(
    level=os.environ.get("QCLAB_LOG_LEVEL", "INFO").upper(),
    format="%(asctime)s - %(message)s",
)
logger = logging.getLogger("qclab")
