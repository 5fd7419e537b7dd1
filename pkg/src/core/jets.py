"""
Второго порядка прямое автоматическое дифференцирование по трём переменным:
значение, градиент и гессиан переносятся через арифметику без разностей.
"""
from typing import Union

import numpy as np

Number = Union[int, float, complex]


def _mirror_upper(m) -> np.ndarray:
    """Верхний треугольник отражается вниз: гессиан симметричен побитово"""
    m = np.asarray(m, dtype=complex)
    return np.triu(m) + np.triu(m, 1).T


class Jet2:
    """Значение, градиент (3) и симметричный гессиан (3×3) комплексной функции"""

    __slots__ = ("value", "grad", "hess")

    def __init__(self, value: Number, grad=None, hess=None):
        self.value = complex(value)
        self.grad = np.zeros(3, dtype=complex) if grad is None else np.asarray(grad, dtype=complex)
        self.hess = np.zeros((3, 3), dtype=complex) if hess is None else _mirror_upper(hess)

    @classmethod
    def variable(cls, value: float, index: int) -> "Jet2":
        grad = np.zeros(3, dtype=complex)
        grad[index] = 1.0
        return cls(value, grad)

    @classmethod
    def variables(cls, w) -> tuple:
        return tuple(cls.variable(float(wi), i) for i, wi in enumerate(w))

    @staticmethod
    def lift(other) -> "Jet2":
        return other if isinstance(other, Jet2) else Jet2(other)

    def _compose(self, f0: complex, f1: complex, f2: complex) -> "Jet2":
        """φ(u) по значениям φ, φ′, φ″ в u"""
        g = self.grad
        return Jet2(f0, f1 * g, f1 * self.hess + f2 * np.outer(g, g))

    def __add__(self, other):
        other = Jet2.lift(other)
        return Jet2(self.value + other.value, self.grad + other.grad, self.hess + other.hess)

    __radd__ = __add__

    def __neg__(self):
        return Jet2(-self.value, -self.grad, -self.hess)

    def __sub__(self, other):
        return self + (-Jet2.lift(other))

    def __rsub__(self, other):
        return Jet2.lift(other) - self

    def __mul__(self, other):
        if not isinstance(other, Jet2):
            return Jet2(self.value * other, self.grad * other, self.hess * other)
        cross = np.outer(self.grad, other.grad)
        return Jet2(
            self.value * other.value,
            self.value * other.grad + other.value * self.grad,
            self.value * other.hess + other.value * self.hess + cross + cross.T,
        )

    __rmul__ = __mul__

    def reciprocal(self) -> "Jet2":
        u = self.value
        return self._compose(1 / u, -1 / u ** 2, 2 / u ** 3)

    def __truediv__(self, other):
        if not isinstance(other, Jet2):
            return self * (1 / other)
        return self * other.reciprocal()

    def __rtruediv__(self, other):
        return self.reciprocal() * other

    def __pow__(self, p: float):
        u = self.value
        if u == 0:
            raise ZeroDivisionError("Степень джета в нуле")
        return self._compose(u ** p, p * u ** (p - 1), p * (p - 1) * u ** (p - 2))

    def __repr__(self):
        return f"Jet2(value={self.value})"


def value_of(x) -> complex:
    return x.value if isinstance(x, Jet2) else complex(x)
