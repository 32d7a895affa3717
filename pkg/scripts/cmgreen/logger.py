import logging
import time
from contextlib import contextmanager

from scripts.cmgreen.tool import cwd, human_readable_duration, is_dev

logger = logging.getLogger("cmgreen")
logger.setLevel(logging.DEBUG)

formatter = logging.Formatter("%(asctime)s - %(name)s - %(levelname)s - %(message)s")

file_handler = logging.FileHandler(f"{cwd}/log.log", encoding="utf-8")
file_handler.setLevel(logging.DEBUG)
file_handler.setFormatter(formatter)
logger.addHandler(file_handler)

if is_dev:
    console_handler = logging.StreamHandler()
    console_handler.setLevel(logging.INFO)
    console_handler.setFormatter(formatter)
    logger.addHandler(console_handler)


@contextmanager
def timed(what: str, level: int = logging.INFO):
    """Log the start of a long reduction and its elapsed time on exit."""
    start = time.time()
    logger.log(level, "%s started", what)
    try:
        yield
    finally:
        logger.log(level, "%s took %s", what, human_readable_duration(time.time() - start))
