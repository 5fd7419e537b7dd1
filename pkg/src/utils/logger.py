import sys
from typing import Optional

from loguru import logger

_FORMAT = "<green>{time:HH:mm:ss}</green> | <level>{level: <8}</level> | {message}"


def setup_logger(verbose: bool = False, log_file: Optional[str] = None):
    """Настраивает loguru: DEBUG при --verbose, иначе WARNING"""
    logger.remove()
    logger.add(sys.stderr, level="DEBUG" if verbose else "WARNING", format=_FORMAT)
    if log_file:
        logger.add(log_file, level="DEBUG", format=_FORMAT, encoding="utf-8")
    return logger


__all__ = ["logger", "setup_logger"]
