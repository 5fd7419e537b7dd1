from dataclasses import dataclass, field
from typing import Dict, List, Optional, Any
from enum import Enum
import math

import numpy as np
from scipy.special import roots_legendre

from src.errors import GroupElementError, ParameterError, DiscriminantError


class CheckStatus(Enum):
    PASSED = "PASSED"
    FAILED = "FAILED"
    ERROR = "ERROR"


@dataclass(frozen=True)
class QForm:
    """Целочисленная бинарная квадратичная форма [a, b, c] = aX² + bXY + cY²"""
    a: int
    b: int
    c: int

    def __iter__(self):
        yield self.a
        yield self.b
        yield self.c

    def __repr__(self):
        return f"[{self.a},{self.b},{self.c}]"

    def as_tuple(self) -> tuple:
        return self.a, self.b, self.c


@dataclass(frozen=True)
class UpperHalfPoint:
    """Точка z = x + iy верхней полуплоскости (y > 0)"""
    x: float
    y: float

    def __post_init__(self):
        if not (self.y > 0) or not math.isfinite(self.y) or not math.isfinite(self.x):
            raise ParameterError(f"Точка вне верхней полуплоскости: x={self.x}, y={self.y}")

    @classmethod
    def from_complex(cls, z: complex) -> "UpperHalfPoint":
        return cls(float(z.real), float(z.imag))

    @property
    def z(self) -> complex:
        return complex(self.x, self.y)

    def __repr__(self):
        return f"{self.x:+.12g}{self.y:+.12g}i"


@dataclass(frozen=True)
class GroupElement:
    """Элемент SL2(Z): [[a, b], [c, d]] с ad − bc = 1"""
    a: int
    b: int
    c: int
    d: int

    def __post_init__(self):
        if self.a * self.d - self.b * self.c != 1:
            raise GroupElementError(f"Определитель не равен 1: {self.as_rows()}")

    def __mul__(self, other: "GroupElement") -> "GroupElement":
        return GroupElement(
            self.a * other.a + self.b * other.c,
            self.a * other.b + self.b * other.d,
            self.c * other.a + self.d * other.c,
            self.c * other.b + self.d * other.d,
        )

    def __neg__(self) -> "GroupElement":
        return GroupElement(-self.a, -self.b, -self.c, -self.d)

    def as_rows(self) -> list:
        return [[self.a, self.b], [self.c, self.d]]

    def in_gamma0(self, level: int) -> bool:
        return self.c % level == 0


@dataclass(frozen=True)
class SeriesParams:
    """Параметры f_{k,D} и ω_{k+1,D}: чётный вес k > 2, дискриминант D, точность tol"""
    k: int
    D: int
    tol: float = 1e-8
    allow_square: bool = False

    def __post_init__(self):
        if self.k <= 2 or self.k % 2:
            raise ParameterError(f"k должно быть чётным и > 2, получено k={self.k}")
        if self.D <= 0 or self.D % 4 not in (0, 1):
            raise DiscriminantError(f"D={self.D} не является положительным дискриминантом")
        if not self.tol > 0:
            raise ParameterError(f"tol должен быть положительным, получено {self.tol}")


@dataclass(frozen=True)
class TruncatedValue:
    """Значение усечённого ряда вместе с оценкой хвоста"""
    value: complex
    tail_bound: float
    radius_used: float
    converged: bool = True
    terms: int = 0


@dataclass
class QuadratureGrid:
    """
    Сетка на стандартной фундаментальной области SL2(Z), усечённой на высоте Y:
    узлы Гаусса–Лежандра по x ∈ [−1/2, 1/2] и по y ∈ [√(1 − x²), Y] в каждом столбце.
    """
    x_nodes: np.ndarray
    x_weights: np.ndarray
    y_unit_nodes: np.ndarray
    y_unit_weights: np.ndarray
    cutoff: float = 6.0
    index: int = 1

    @classmethod
    def standard(cls, cutoff: float = 6.0, nx: int = 32, ny: int = 64, index: int = 1) -> "QuadratureGrid":
        if cutoff <= 1.0:
            raise ParameterError(f"Высота усечения Y={cutoff} должна быть больше 1")
        x, wx = roots_legendre(nx)
        t, wt = roots_legendre(ny)
        return cls(x / 2, wx / 2, t, wt, cutoff, index)

    def column(self, x: float):
        """Узлы и веса по y в столбце над x"""
        low = math.sqrt(max(0.0, 1.0 - x * x))
        half = (self.cutoff - low) / 2
        return low + half * (self.y_unit_nodes + 1), half * self.y_unit_weights

    def points(self):
        """Все узлы z и веса dx·dy (без меры y^{−2})"""
        zs, ws = [], []
        for x, wx in zip(self.x_nodes, self.x_weights):
            ys, wy = self.column(float(x))
            zs.append(x + 1j * ys)
            ws.append(wx * wy)
        return np.concatenate(zs), np.concatenate(ws)


@dataclass
class VerificationReport:
    """Результат одной именованной проверки тождества"""
    check_name: str
    params: Dict[str, Any] = field(default_factory=dict)
    residual: float = math.inf
    tolerance: float = 0.0
    status: CheckStatus = CheckStatus.FAILED
    notes: str = ""
    values: Dict[str, Any] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return self.status == CheckStatus.PASSED

    @classmethod
    def from_residual(cls, check_name: str, residual: float, tolerance: float,
                      params: Optional[dict] = None, notes: str = "",
                      values: Optional[dict] = None) -> "VerificationReport":
        ok = math.isfinite(residual) and residual <= tolerance
        return cls(
            check_name=check_name,
            params=params or {},
            residual=float(residual),
            tolerance=float(tolerance),
            status=CheckStatus.PASSED if ok else CheckStatus.FAILED,
            notes=notes,
            values=values or {},
        )


@dataclass
class SuiteResult:
    """Итог набора проверок"""
    suite: str
    reports: List[VerificationReport] = field(default_factory=list)

    @property
    def all_passed(self) -> bool:
        return all(r.passed for r in self.reports)
