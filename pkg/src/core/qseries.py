"""
Усечённые ряды Лорана по q = e^{2πiz} с точными рациональными коэффициентами.

Ряд хранит валюацию (наименьший показатель), коэффициенты и точность N:
коэффициенты известны для показателей < N. Арифметика никогда не расширяет
точность: точность результата не больше точностей аргументов.
"""
import cmath
import math
from fractions import Fraction
from functools import lru_cache
from typing import List, Optional, Sequence, Tuple

import numpy as np

from src.errors import IntegralityError, ParameterError, PrecisionError
from src.models import UpperHalfPoint
from src.utils.logger import logger
from src.utils.summation import complex_fsum

DEFAULT_PRECISION = 64

# −2k/B_k для E_2, E_4, E_6
_EISENSTEIN_FACTORS = {2: -24, 4: 240, 6: -504}


class LaurentQSeries:
    """Усечённый ряд Лорана Σ c_n qⁿ, n ≥ valuation, n < precision"""

    __slots__ = ("valuation", "coefficients", "precision")

    def __init__(self, valuation: int, coefficients: Sequence, precision: int):
        coeffs = [Fraction(c) for c in coefficients][: max(0, precision - valuation)]
        # отбрасываем ведущие нули
        shift = 0
        while shift < len(coeffs) and coeffs[shift] == 0:
            shift += 1
        coeffs = coeffs[shift:]
        valuation += shift
        if not coeffs:
            valuation = precision
        coeffs += [Fraction(0)] * (precision - valuation - len(coeffs))
        self.valuation = valuation
        self.coefficients = tuple(coeffs)
        self.precision = precision

    @classmethod
    def constant(cls, value, precision: int) -> "LaurentQSeries":
        return cls(0, [value], precision)

    @classmethod
    def monomial(cls, exponent: int, precision: int, value=1) -> "LaurentQSeries":
        return cls(exponent, [value], precision)

    def is_zero(self) -> bool:
        return not self.coefficients

    def coefficient(self, n: int) -> Fraction:
        if n >= self.precision:
            raise PrecisionError(f"Коэффициент q^{n} неизвестен (точность {self.precision})")
        if n < self.valuation:
            return Fraction(0)
        return self.coefficients[n - self.valuation]

    def items(self):
        for i, c in enumerate(self.coefficients):
            yield self.valuation + i, c

    def truncate(self, precision: int) -> "LaurentQSeries":
        if precision > self.precision:
            raise PrecisionError(f"Нельзя повысить точность {self.precision} до {precision}")
        return LaurentQSeries(self.valuation, self.coefficients, precision)

    def is_integral(self) -> bool:
        return all(c.denominator == 1 for c in self.coefficients)

    def require_integral(self, what: str = "ряд") -> "LaurentQSeries":
        if not self.is_integral():
            raise IntegralityError(f"[QSeries] {what}: коэффициенты не целые")
        return self

    # --- арифметика -------------------------------------------------------

    def __add__(self, other):
        if not isinstance(other, LaurentQSeries):
            other = LaurentQSeries.constant(other, self.precision)
        precision = min(self.precision, other.precision)
        start = min(self.valuation, other.valuation, precision)
        coeffs = [self.coefficient(n) + other.coefficient(n) for n in range(start, precision)]
        return LaurentQSeries(start, coeffs, precision)

    __radd__ = __add__

    def __neg__(self):
        return LaurentQSeries(self.valuation, [-c for c in self.coefficients], self.precision)

    def __sub__(self, other):
        return self + (-other if isinstance(other, LaurentQSeries) else -Fraction(other))

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, factor) -> "LaurentQSeries":
        factor = Fraction(factor)
        return LaurentQSeries(self.valuation, [factor * c for c in self.coefficients], self.precision)

    def __mul__(self, other):
        if not isinstance(other, LaurentQSeries):
            return self.scale(other)
        precision = min(self.precision + other.valuation, other.precision + self.valuation)
        valuation = self.valuation + other.valuation
        length = precision - valuation
        if length <= 0:
            return LaurentQSeries(precision, [], precision)
        a, b = self.coefficients, other.coefficients
        out = [Fraction(0)] * length
        for i, ai in enumerate(a[:length]):
            if ai == 0:
                continue
            for j, bj in enumerate(b[: length - i]):
                out[i + j] += ai * bj
        return LaurentQSeries(valuation, out, precision)

    __rmul__ = __mul__

    def inverse(self) -> "LaurentQSeries":
        if self.is_zero():
            raise ZeroDivisionError("Обращение нулевого ряда")
        a = self.coefficients
        length = self.precision - self.valuation
        inv_lead = 1 / a[0]
        b = [inv_lead]
        for n in range(1, length):
            acc = sum((a[i] * b[n - i] for i in range(1, min(n, len(a) - 1) + 1)), Fraction(0))
            b.append(-inv_lead * acc)
        return LaurentQSeries(-self.valuation, b, -self.valuation + length)

    def __truediv__(self, other):
        if isinstance(other, LaurentQSeries):
            return self * other.inverse()
        return self.scale(Fraction(1) / Fraction(other))

    def __pow__(self, exponent: int):
        if exponent < 0:
            return self.inverse() ** (-exponent)
        if exponent == 0:
            return LaurentQSeries.constant(1, self.precision)
        result = self
        for _ in range(exponent - 1):
            result = result * self
        return result

    def derivative(self) -> "LaurentQSeries":
        """q·d/dq, то есть (1/2πi)·d/dz"""
        return LaurentQSeries(self.valuation, [n * c for n, c in self.items()], self.precision)

    def __eq__(self, other):
        if not isinstance(other, LaurentQSeries):
            return NotImplemented
        precision = min(self.precision, other.precision)
        start = min(self.valuation, other.valuation, precision)
        return all(self.coefficient(n) == other.coefficient(n) for n in range(start, precision))

    def __repr__(self):
        head = " + ".join(f"{c}*q^{n}" for n, c in list(self.items())[:4] if c)
        return f"LaurentQSeries({head} + O(q^{self.precision}))"

    def to_lines(self) -> List[str]:
        """Строки вида n:coefficient для эталонных файлов"""
        return [f"{n}:{c}" for n, c in self.items()]


def add(s: LaurentQSeries, t: LaurentQSeries) -> LaurentQSeries:
    return s + t


def mul(s: LaurentQSeries, t: LaurentQSeries) -> LaurentQSeries:
    return s * t


def scalar(s: LaurentQSeries, factor) -> LaurentQSeries:
    return s.scale(factor)


def derivative(s: LaurentQSeries) -> LaurentQSeries:
    return s.derivative()


ramanujan_theta = derivative


def _sigma(n: int, power: int) -> int:
    total = 0
    d = 1
    while d * d <= n:
        if n % d == 0:
            total += d ** power
            if d * d != n:
                total += (n // d) ** power
        d += 1
    return total


@lru_cache(maxsize=None)
def eisenstein(weight: int, N: int = DEFAULT_PRECISION) -> LaurentQSeries:
    """E_2, E_4, E_6: 1 − (2k/B_k)·Σ σ_{k−1}(n)qⁿ до q^N"""
    if weight not in _EISENSTEIN_FACTORS:
        raise ParameterError(f"Вес {weight} не поддерживается (только 2, 4, 6)")
    if N < 1:
        raise ParameterError("Точность N должна быть ≥ 1")
    factor = _EISENSTEIN_FACTORS[weight]
    coeffs = [1] + [factor * _sigma(n, weight - 1) for n in range(1, N)]
    return LaurentQSeries(0, coeffs, N)


@lru_cache(maxsize=None)
def delta(N: int = DEFAULT_PRECISION) -> LaurentQSeries:
    """Δ = (E_4³ − E_6²)/1728 = q − 24q² + 252q³ − ..."""
    e4, e6 = eisenstein(4, N), eisenstein(6, N)
    return ((e4 ** 3 - e6 ** 2) / 1728).require_integral("Δ")


@lru_cache(maxsize=None)
def klein_j(N: int = DEFAULT_PRECISION) -> LaurentQSeries:
    """j = E_4³/Δ = q^{−1} + 744 + 196884q + ..."""
    P = N + 2
    e4 = eisenstein(4, P)
    j = (e4 ** 3) / delta(P)
    return j.truncate(N).require_integral("j")


@lru_cache(maxsize=None)
def faber_basis(n_max: int, N: int = DEFAULT_PRECISION) -> Tuple[LaurentQSeries, ...]:
    """j_0, ..., j_{n_max}: j_n = q^{−n} + O(q) с целыми коэффициентами"""
    if n_max < 0:
        raise ParameterError("Индекс базиса Фабера должен быть неотрицательным")
    P = N + n_max + 1
    j1 = klein_j(P) - 744
    basis = [LaurentQSeries.constant(1, P), j1]
    for n in range(2, n_max + 1):
        g = j1 * basis[n - 1]
        for m in range(-n + 1, 1):
            coeff = g.coefficient(m)
            if coeff:
                g = g - basis[-m] * coeff
        basis.append(g.require_integral(f"j_{n}"))
    logger.debug(f"[QSeries] Базис Фабера до j_{n_max} при точности {N}")
    return tuple(s.truncate(N) for s in basis[: n_max + 1])


def faber(n: int, N: int = DEFAULT_PRECISION) -> LaurentQSeries:
    """Функция j_n с разложением q^{−n} + O(q)"""
    return faber_basis(n, N)[n]


def _float_coefficients(s: LaurentQSeries) -> np.ndarray:
    return np.array([float(c) for c in s.coefficients], dtype=float)


def tail_estimate(s: LaurentQSeries, y: float) -> float:
    """
    Мажоранта хвоста Σ_{n ≥ N} |c_n||q|ⁿ.

    Огибающая e_n = max_{m ≤ n}|c_m| продолжается геометрически с шагом g,
    взятым по хорде log e на последнем блоке коэффициентов (log-вогнутый рост
    степенного и exp(C√n) типа хордой только завышается). Множитель 1 + ln n
    покрывает выбросы делительных функций: σ₁(n) ≤ n(1 + ln n).
    """
    if s.is_zero():
        return 0.0
    envelope = np.maximum.accumulate(np.abs(_float_coefficients(s)))
    top = float(envelope[-1])
    if top == 0.0:
        return 0.0
    N = s.precision
    count = len(envelope)
    block = min(count - 1, max(4, count // 4))
    base = float(envelope[-1 - block]) if block > 0 else 0.0
    if base > 0.0:
        log_growth = max(0.0, math.log(top / base) / block)
    else:
        # нет опоры для хорды: рост как у ненулевой части ряда целиком
        nonzero = np.flatnonzero(envelope)
        span = count - 1 - int(nonzero[0])
        if span == 0:
            return math.inf
        log_growth = max(0.0, math.log(top / float(envelope[nonzero[0]])) / span)

    n_log = max(N, 1)
    log_safety = math.log1p(math.log(n_log))
    log_r = log_growth - 2.0 * math.pi * y + 1.0 / (n_log * (1.0 + math.log(n_log)))
    if log_r >= 0.0:
        return math.inf
    log_term = math.log(top) + log_safety + log_growth + N * (-2.0 * math.pi * y)
    if log_term < -745:
        return 0.0
    return math.exp(log_term) / -math.expm1(log_r)


def evaluate_q(s: LaurentQSeries, z: UpperHalfPoint, tol: Optional[float] = None) -> Tuple[complex, float]:
    """Σ cₙ e^{2πinz} и оценка хвоста; при tail > tol PrecisionError"""
    if s.is_zero():
        value = 0j
    else:
        exponents = np.arange(s.valuation, s.precision)
        terms = _float_coefficients(s) * np.exp(2j * math.pi * exponents * z.z)
        value = complex_fsum(terms)
    tail = tail_estimate(s, z.y)
    if tol is not None and tail > tol:
        raise PrecisionError(
            f"[QSeries] Хвост {tail:.3e} выше допуска {tol:.1e} в точке {z} (N={s.precision})"
        )
    return value, tail


def evaluate_array(s: LaurentQSeries, points: np.ndarray) -> np.ndarray:
    """Векторное вычисление ряда в массиве комплексных точек (без оценки хвоста)"""
    points = np.asarray(points, dtype=complex)
    if s.is_zero():
        return np.zeros(points.shape, dtype=complex)
    exponents = np.arange(s.valuation, s.precision)
    coeffs = _float_coefficients(s)
    phases = np.exp(2j * math.pi * np.multiply.outer(points, exponents))
    return phases @ coeffs


def q_of(z: UpperHalfPoint) -> complex:
    return cmath.exp(2j * math.pi * z.z)


def _poly_combine(p: Sequence[int], q: Sequence[int], factor: int) -> Tuple[int, ...]:
    """p − factor·q для многочленов, заданных коэффициентами по возрастанию степени"""
    size = max(len(p), len(q))
    out = [(p[i] if i < len(p) else 0) - factor * (q[i] if i < len(q) else 0) for i in range(size)]
    while len(out) > 1 and out[-1] == 0:
        out.pop()
    return tuple(out)


@lru_cache(maxsize=None)
def faber_polynomials(n_max: int) -> Tuple[Tuple[int, ...], ...]:
    """Многочлены P_n с целыми коэффициентами: j_n = P_n(j), n = 0..n_max"""
    if n_max < 0:
        raise ParameterError("Индекс многочлена Фабера должен быть неотрицательным")
    P = 2 * n_max + 4
    j1 = klein_j(P) - 744
    series = [LaurentQSeries.constant(1, P), j1]
    polys = [(1,), (-744, 1)]
    for n in range(2, n_max + 1):
        g = j1 * series[n - 1]
        shifted = (0,) + polys[n - 1]
        poly = _poly_combine(shifted, polys[n - 1], 744)
        for m in range(-n + 1, 1):
            coeff = g.coefficient(m)
            if coeff:
                g = g - series[-m] * coeff
                poly = _poly_combine(poly, polys[-m], int(coeff))
        series.append(g)
        polys.append(poly)
    return tuple(polys[: n_max + 1])


def faber_value(n: int, j_value: int) -> int:
    """j_n в точке, где значение j известно точно (например, j(ρ) = 0, j(i) = 1728)"""
    value = 0
    for coeff in reversed(faber_polynomials(n)[n]):
        value = value * j_value + coeff
    return value
