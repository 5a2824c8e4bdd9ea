"""
YAML config parser
"""
import os
import logging
from typing import (Dict, Iterable, Optional)

import hiyapyco
import yaml

logger = logging.getLogger("SUMusic")

DEFAULT_CONFIG = os.path.abspath(
    os.path.join(
        os.path.dirname(os.path.realpath(__file__)),
        "config.yaml"
    )
)


def config_parser(
    default_path: str = DEFAULT_CONFIG
) -> Dict:
    """
    :param default_path: path to config file
    :return: dict from yaml config
    """
    try:
        with open(default_path) as f:
            config = yaml.safe_load(f)
            if not isinstance(config, dict):
                logger.error(
                    f"Config file '{default_path}' not of key -> value type."
                    "Execution aborted. "
                )
                raise TypeError
            logger.debug("Config loaded from " + default_path)
    except (FileNotFoundError, PermissionError) as e:
        logger.error(
            "Config file not found. Ensure that default config file is "
            f"available and accessible at '{default_path}'."
            "Execution aborted. "
            f"Original error message: {type(e).__name__}: {e}"
        )
        raise
    return config


def load_config(
    overrides: Optional[Iterable[str]] = None,
    default_path: str = DEFAULT_CONFIG,
) -> Dict:
    """
    Loads the default config and merges any number of user config files on
    top of it; later files take precedence.

    :param overrides: Paths to YAML files holding (partial) configs.
    :param default_path: Path to the default config file.

    :return: Merged config as a plain dictionary.
    """
    paths = [default_path] + [
        os.path.abspath(p) for p in (overrides or [])
    ]
    if len(paths) == 1:
        return config_parser(default_path)
    for path in paths:
        if not os.path.isfile(path):
            raise FileNotFoundError(f"Config file '{path}' not found.")
    merged = hiyapyco.load(
        paths,
        method=hiyapyco.METHOD_MERGE,
        usedefaultyamlloader=True,
        failonmissingfiles=True,
        mergelists=False,
    )
    config = yaml.safe_load(hiyapyco.dump(merged, default_flow_style=False))
    if not isinstance(config, dict):
        raise TypeError("Merged config is not of key -> value type.")
    logger.debug(f"Config merged from: {', '.join(paths)}")
    return config
