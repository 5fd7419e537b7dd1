from .validator import Validator
from .reporter import Reporter


__all__ = ["Validator", "Reporter"]
