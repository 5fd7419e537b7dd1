# src/checks/base_checker.py
from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, List, Optional

import numpy as np

from ..errors import VerificationError
from ..models import CheckStatus, UpperHalfPoint, VerificationReport
from ..utils.logger import logger


@dataclass
class RunContext:
    """Параметры запуска набора: зерно генератора и переопределения из командной строки"""
    seed: int = 42
    overrides: Dict[str, Any] = field(default_factory=dict)

    def rng(self, salt: int = 0) -> np.random.Generator:
        return np.random.default_rng([self.seed, salt])


class BaseCheck(ABC):
    """Абстрактный базовый класс для всех наборов проверок"""

    def __init__(self, check_id: str, check_name: str):
        self.check_id = check_id
        self.check_name = check_name
        self.rules = None

    def set_rules(self, rules: Dict[str, Any]):
        """
        Загружает параметры набора из конфига.
        Дочерние классы читают свои ключи через _safe_get_rule.
        """
        self.rules = rules

    @abstractmethod
    def run(self, context: RunContext) -> List[VerificationReport]:
        """Выполняет все проверки набора"""

    def _safe_get_rule(self, rule_path: str, default: Any = None) -> Any:
        """
        Безопасно извлекает правило из конфига по пути.
        Пример: _safe_get_rule('suites.theorem1.k', 6)
        """
        if not self.rules:
            return default

        value = self.rules
        for key in rule_path.split('.'):
            if isinstance(value, dict) and key in value:
                value = value[key]
            else:
                return default

        return value

    def _setting(self, context: RunContext, key: str, default: Any = None) -> Any:
        """Значение из командной строки, иначе из suites.<id>.<key>, иначе default"""
        if context.overrides.get(key) is not None:
            return context.overrides[key]
        return self._safe_get_rule(f"suites.{self.check_id}.{key}", default)

    def _name(self, suffix: str) -> str:
        return f"{self.check_id}.{suffix}"

    def _guarded(self, name: str, params: Dict[str, Any],
                 compute: Callable[[], VerificationReport]) -> VerificationReport:
        """Ошибка вычисления превращается в отчёт со статусом ERROR, а не роняет набор"""
        try:
            return compute()
        except VerificationError as exc:
            logger.error(f"[{self.check_id}] {name}: {exc}")
            return VerificationReport(
                check_name=name, params=params, status=CheckStatus.ERROR,
                notes=f"{type(exc).__name__}: {exc}",
            )

    @staticmethod
    def _random_points(rng: np.random.Generator, count: int, y_low: float = 0.8,
                       y_high: float = 2.0, x_half: float = 0.5) -> List[UpperHalfPoint]:
        xs = rng.uniform(-x_half, x_half, count)
        ys = rng.uniform(y_low, y_high, count)
        return [UpperHalfPoint(round(float(x), 12), round(float(y), 12)) for x, y in zip(xs, ys)]

    @staticmethod
    def _point_params(z: UpperHalfPoint) -> List[float]:
        return [z.x, z.y]

    @staticmethod
    def _max(values: List[float], default: Optional[float] = 0.0) -> float:
        return max(values) if values else default
