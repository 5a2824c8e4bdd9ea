"""Custom decorators."""

from functools import wraps
import logging
import time
from typing import Callable

logger = logging.getLogger("SUMusic")


def log_exception(
    logger: logging.Logger = logger,
    level: int = logging.ERROR,
    tb: bool = False,
    reraise: bool = True,
    default=None,
) -> Callable:
    """
    Logs every exception raised by the decorated function.

    :param logger: Logger object.
    :param level: Logging level for the error message.
    :param tb: Whether to log the traceback.
    :param reraise: If `False`, the exception is swallowed and `default` is
            returned instead.
    :param default: Return value in case of a swallowed exception.
    """

    def decorator(fn: Callable) -> Callable:

        @wraps(fn)
        def wrapper(*args, **kwargs):
            try:
                return fn(*args, **kwargs)
            except Exception as e:
                description = getattr(e, "description", str(e))
                err = f"{fn.__name__} failed: {type(e).__name__}: " \
                      f"{description}"
                logger.log(level=level, msg=err, exc_info=tb)
                if reraise:
                    raise
                return default

        return wrapper

    return decorator


def timed(
    logger: logging.Logger = logger,
    level: int = logging.INFO,
) -> Callable:
    """Logs the wall-clock duration of every call of the decorated function."""

    def decorator(fn: Callable) -> Callable:

        @wraps(fn)
        def wrapper(*args, **kwargs):
            start = time.perf_counter()
            try:
                return fn(*args, **kwargs)
            finally:
                logger.log(
                    level,
                    f"{fn.__name__} took {time.perf_counter() - start:.2f}s"
                )

        return wrapper

    return decorator
