"""
Logging utilities for the simulator.
"""
import os
import sys
import logging
from logging.handlers import RotatingFileHandler

from super_jc import config
from super_jc.errors import OutputError

LOG_FORMAT = '%(asctime)s - %(name)s - %(levelname)s - %(message)s'


def setup_logging(log_level=None, log_file=None):
    """
    Set up logging for the simulator.

    Console output goes to stderr so that stdout only carries command summaries.

    Args:
        log_level: The log level (DEBUG, INFO, WARNING, ERROR, CRITICAL)
        log_file: The log file path; empty disables file logging

    Returns:
        The package logger

    Raises:
        OutputError: if the log file cannot be opened
    """
    level = log_level or config.LOG_LEVEL
    file_path = log_file if log_file is not None else config.LOG_FILE

    if isinstance(level, str):
        level = getattr(logging, level.upper(), logging.INFO)

    logger = logging.getLogger('super_jc')
    logger.setLevel(level)
    logger.handlers = []

    console_handler = logging.StreamHandler(sys.stderr)
    console_handler.setLevel(level)
    console_handler.setFormatter(logging.Formatter(LOG_FORMAT))
    logger.addHandler(console_handler)

    if file_path:
        log_dir = os.path.dirname(file_path)
        try:
            if log_dir and not os.path.exists(log_dir):
                os.makedirs(log_dir, exist_ok=True)

            # 10 MB per file, 5 backups
            file_handler = RotatingFileHandler(
                file_path,
                maxBytes=10*1024*1024,
                backupCount=5
            )
        except OSError as e:
            raise OutputError(f"cannot open log file {file_path}: {e}") from e
        file_handler.setLevel(level)
        file_handler.setFormatter(logging.Formatter(LOG_FORMAT))
        logger.addHandler(file_handler)

    logger.debug(f"Logging initialized with level {logging.getLevelName(level)}")
    if file_path:
        logger.debug(f"Logging to file: {file_path}")

    return logger
