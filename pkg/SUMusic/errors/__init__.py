"""
Custom errors, error handler functions and function to register error handlers
that map exceptions to CLI exit codes.
"""
import logging
from typing import (Callable, Dict, Optional, Type)

logger = logging.getLogger("SUMusic")

# Exit codes
EXIT_SUCCESS = 0
EXIT_PARTIAL_FAILURE = 1
EXIT_USAGE_ERROR = 2


# Custom exceptions
class SUMusicError(Exception):
    """Base class for all errors raised by SUMusic."""

    def __init__(self, description: str) -> None:
        super().__init__(description)
        self.description = description


class ValidationError(SUMusicError):
    """Error raised for invalid input parameters or configuration values."""


class DecodeError(SUMusicError):
    """Error raised if an audio file cannot be decoded."""


class EmptyInputError(SUMusicError):
    """Error raised if an input (file, signal, sequence) is empty."""


class TooShortError(SUMusicError):
    """Error raised if a signal is shorter than a required minimum."""


class TooLongError(SUMusicError):
    """Error raised if a requested extent exceeds the available signal."""


class InvalidSelectionError(SUMusicError):
    """Error raised for unsorted, overlapping or out-of-range time spans."""


class OutputExistsError(SUMusicError):
    """Error raised if an output directory exists and is not empty."""


class ManifestError(SUMusicError):
    """Error raised for unreadable, malformed or inconsistent manifests."""

    def __init__(
        self,
        description: str,
        path: Optional[str] = None,
        line: Optional[int] = None,
    ) -> None:
        location = ""
        if path is not None:
            location = f"{path}"
            if line is not None:
                location += f":{line}"
            location += ": "
        super().__init__(f"{location}{description}")
        self.path = path
        self.line = line


# Error handlers
def handle_usage_error(exception: Exception) -> int:
    logger.error(f"{type(exception).__name__}: {exception}")
    return EXIT_USAGE_ERROR


def handle_unexpected_error(exception: Exception) -> int:
    logger.error(
        f"{type(exception).__name__}: {exception}",
        exc_info=exception,
    )
    return EXIT_PARTIAL_FAILURE


_handlers: Dict[Type[BaseException], Callable[[Exception], int]] = {}


def register_error_handlers() -> Dict[Type[BaseException], Callable]:
    """Registers handlers that map exceptions to exit codes."""
    _handlers.clear()
    _handlers[ValidationError] = handle_usage_error
    _handlers[ManifestError] = handle_usage_error
    _handlers[OutputExistsError] = handle_usage_error
    _handlers[FileNotFoundError] = handle_usage_error
    logger.debug('Registered custom error handlers.')
    return _handlers


def handle_error(exception: Exception) -> int:
    """
    Logs an exception with the most specific registered handler and returns
    the exit code the CLI should terminate with.
    """
    if not _handlers:
        register_error_handlers()
    for cls in type(exception).__mro__:
        if cls in _handlers:
            return _handlers[cls](exception)
    return handle_unexpected_error(exception)
