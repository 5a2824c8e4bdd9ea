"""
Logging configuration and convenience functions.
"""
import logging
import sys
from typing import Optional

import numpy as np
import yaml


def setup_logger(
    name: str,
    level: int = logging.INFO
) -> logging.Logger:
    """Set up logger"""
    logger = logging.getLogger(name)
    logger.setLevel(level)

    if not logger.handlers:

        # Add stream handler for STDERR
        stream = logging.StreamHandler(sys.stderr)
        stream.setFormatter(
            logging.Formatter(
                "[%(asctime)s: %(levelname)s] %(message)s"
            )
        )
        logger.addHandler(stream)

    return logger


def to_plain(value):
    """
    Converts numpy scalars and arrays, tuples and nested containers thereof
    into plain Python types that can be dumped by `yaml.safe_dump()`.
    """
    if isinstance(value, dict):
        return {str(k): to_plain(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [to_plain(v) for v in value]
    if isinstance(value, np.ndarray):
        return to_plain(value.tolist())
    if isinstance(value, np.integer):
        return int(value)
    if isinstance(value, np.floating):
        return float(value)
    if isinstance(value, np.bool_):
        return bool(value)
    return value


def log_yaml(
    header: Optional[str] = None,
    level: int = logging.DEBUG,
    logger: logging.Logger = logging.getLogger(__name__),
    **kwargs,
) -> None:
    """
        Logs each of a number of keyword arguments with the indicated logging
        level in YAML format. Dictionaries and iterable objects are logged
        recursively; numpy values are converted to plain Python types.

        :param header: If not `None`, the header is logged before any of the
                keyword arguments are processed.
        :param level: Logging level.
        :param logger: The logger to be used.

        :return: None.
    """
    # Skip serialization entirely if the level is filtered out
    if not logger.isEnabledFor(level):
        return None

    # Log header
    if header is not None:
        logger.log(level, header)

    # Log value
    if kwargs:
        text = yaml.safe_dump(
            to_plain(kwargs),
            allow_unicode=True,
            default_flow_style=False
        ).splitlines()
        for line in text:
            logger.log(level, line)
