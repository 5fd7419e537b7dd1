from .logger import logger, setup_logger
from .config_loader import ConfigLoader
from .summation import complex_fsum, real_fsum

__all__ = ["logger", "setup_logger", "ConfigLoader", "complex_fsum", "real_fsum"]
