"""
Configuration settings for the experiment runner.

Defines the path to the YAML configuration file.
"""

import os

CONFIG_FILE_PATH = os.path.join(os.path.dirname(__file__), "qclab_config.yaml")
