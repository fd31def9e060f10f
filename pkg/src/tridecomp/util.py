"""Module to store utility functions."""

import functools
import logging
import time

logger = logging.getLogger(__name__)

LOG_FORMAT = "%(asctime)s %(levelname)s %(name)s: %(message)s"


def timeit(f):
    """Timing decorator."""

    @functools.wraps(f)
    def timed(*args, **kw):
        start_time = time.perf_counter()
        result = f(*args, **kw)
        end_time = time.perf_counter()
        logger.info("func:%s took: %.4f sec", f.__name__, end_time - start_time)
        return result

    return timed


def configure_logging(verbosity: int = 0) -> None:
    """Configure the root logger once for command line use."""
    level = logging.WARNING
    if verbosity == 1:
        level = logging.INFO
    elif verbosity > 1:
        level = logging.DEBUG
    logging.basicConfig(level=level, format=LOG_FORMAT, force=True)
