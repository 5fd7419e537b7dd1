"""
Основные функции как точечные вычислители с контролем усечения:
f_{k,D}, ω_{k+1,D}, голоморфная часть, E_2*, H_z и формула Асаи–Канеко–Ниномии,
две формулы для divisor-формы и ряды Пуанкаре целого веса.
"""
import cmath
import math
from functools import lru_cache
from typing import Dict, Optional, Tuple

import numpy as np

from src.core import qseries
from src.core.qforms import enumerate_bounded_arrays, q_values
from src.errors import (
    ConvergenceError, IllConditionedPointError, ParameterError, PoleError, PrecisionError,
)
from src.models import SeriesParams, TruncatedValue, UpperHalfPoint
from src.utils.logger import logger
from src.utils.summation import complex_fsum, real_fsum

MAX_DOUBLINGS = 14
# порог |f| относительно tol для операций с делением на f
CONDITION_FLOOR = 1e3

KINDS = ("f", "omega", "holomorphic", "fprime", "majorant")


def _majorant_factor(kind: str, k: int, y: float) -> float:
    """Множитель, переводящий хвост Σ|Q|^{−k} в хвост данного ряда"""
    if kind in ("f", "majorant"):
        return 1.0
    if kind == "omega":
        # |Q_z| ≤ |Q(z,1)|/y
        return 1.0 / y
    if kind == "holomorphic":
        # |iyQ'| = |Q − yQ_z| ≤ 2|Q|
        return 2.0 / y
    return 2.0 * k / y


def _terms(k: int, a, b, c, x: float, y: float) -> Dict[str, np.ndarray]:
    q, qz = q_values(a, b, c, x, y)
    inv = 1.0 / q
    inv_k = inv ** k
    inv_k1 = inv_k * inv
    q_prime = (2.0 * np.asarray(a, dtype=float) * x + np.asarray(b, dtype=float)) \
        + 2j * np.asarray(a, dtype=float) * y
    return {
        "f": inv_k,
        "omega": qz * inv_k1,
        "holomorphic": -1j * q_prime * inv_k1,
        "fprime": -k * q_prime * inv_k1,
        "majorant": np.abs(inv_k).astype(complex),
    }


@lru_cache(maxsize=4096)
def _hyperbolic_values(k: int, D: int, x: float, y: float, tol: float,
                       allow_square: bool, max_doublings: int) -> Tuple[Tuple[str, TruncatedValue], ...]:
    z = UpperHalfPoint(x, y)
    r = 2.0 ** (2 - k)
    R = max(2.0 * math.sqrt(D) * y, 1.0)
    previous_abs = None
    first_nonempty = None
    sums: Dict[str, complex] = {}
    tail = math.inf
    count = 0
    converged = False

    for step in range(max_doublings + 1):
        a, b, c = enumerate_bounded_arrays(D, z, R, allow_square)
        count = int(a.size)
        terms = _terms(k, a, b, c, x, y)
        sums = {kind: complex_fsum(values) for kind, values in terms.items()}
        abs_total = real_fsum(np.abs(terms["f"]))
        if count and first_nonempty is None:
            first_nonempty = step
        if previous_abs is not None and first_nonempty is not None:
            # константа хвоста калибруется по последнему слою R/2 < |Q| ≤ R
            tail = (abs_total - previous_abs) * r / (1.0 - r)
            if step >= first_nonempty + 2 and tail <= tol:
                converged = True
                break
        previous_abs = abs_total
        R *= 2.0

    if not converged:
        R /= 2.0
        logger.warning(f"[Series] Сумма k={k}, D={D} в {z} не сошлась: хвост {tail:.3e} > {tol:.1e}")
    else:
        logger.debug(f"[Series] k={k}, D={D}, z={z}: R={R:.4g}, форм {count}, хвост {tail:.3e}")

    return tuple(
        (kind, TruncatedValue(value=sums[kind], tail_bound=tail * _majorant_factor(kind, k, y),
                              radius_used=R, converged=converged, terms=count))
        for kind in KINDS
    )


def hyperbolic_values(p: SeriesParams, z: UpperHalfPoint, strict: bool = False,
                      max_doublings: int = MAX_DOUBLINGS) -> Dict[str, TruncatedValue]:
    """
    Одно адаптивное перечисление форм даёт сразу f, ω, голоморфную часть,
    f′ = −kΣQ′/Q^{k+1} и мажоранту Σ|Q|^{−k}. Радиус удваивается, пока
    оценка хвоста (слой R/2 < |Q| ≤ R, геометрическое убывание 2^{2−k})
    не станет меньше tol.
    """
    values = dict(_hyperbolic_values(p.k, p.D, z.x, z.y, p.tol, p.allow_square, max_doublings))
    if strict and not values["f"].converged:
        raise ConvergenceError(f"[Series] k={p.k}, D={p.D}: сумма не сошлась в {z}")
    return values


def f_hyperbolic(p: SeriesParams, z: UpperHalfPoint) -> TruncatedValue:
    """f_{k,D}(z) = Σ 1/Q(z,1)^k"""
    return hyperbolic_values(p, z)["f"]


def omega(p: SeriesParams, z: UpperHalfPoint) -> TruncatedValue:
    """ω_{k+1,D}(z) = Σ Q_z/Q(z,1)^{k+1}"""
    return hyperbolic_values(p, z)["omega"]


def holomorphic_part(p: SeriesParams, z: UpperHalfPoint) -> TruncatedValue:
    """−i Σ Q′(z,1)/Q(z,1)^{k+1}"""
    return hyperbolic_values(p, z)["holomorphic"]


def f_derivative(p: SeriesParams, z: UpperHalfPoint) -> TruncatedValue:
    """d/dz f_{k,D} = −k Σ Q′(z,1)/Q(z,1)^{k+1}"""
    return hyperbolic_values(p, z)["fprime"]


def omega_majorant(p: SeriesParams, z: UpperHalfPoint) -> float:
    """(1/y)·Σ|Q(z,1)|^{−k}, оценка сверху для |ω_{k+1,D}(z)|"""
    return hyperbolic_values(p, z)["majorant"].value.real / z.y


def e2_star(z: UpperHalfPoint, N: int = qseries.DEFAULT_PRECISION, tol: float = 1e-10) -> complex:
    """E_2*(z) = E_2(z) − 3/(πy)"""
    value, _ = qseries.evaluate_q(qseries.eisenstein(2, N), z, tol)
    return value - 3.0 / (math.pi * z.y)


def h_generating(z: UpperHalfPoint, tau: UpperHalfPoint, N: int = 20,
                 q_precision: int = qseries.DEFAULT_PRECISION, tol: Optional[float] = None) -> complex:
    """H_z(τ) = Σ_{n ≤ N} j_n(z)e^{2πinτ}, только при Im τ > Im z"""
    if tau.y <= z.y:
        raise ParameterError(f"Нужно Im τ > Im z, получено v={tau.y}, y={z.y}")
    basis = qseries.faber_basis(N, q_precision)
    terms, tail = [], 0.0
    for n, j_n in enumerate(basis):
        value, j_tail = qseries.evaluate_q(j_n, z)
        weight = cmath.exp(2j * math.pi * n * tau.z)
        terms.append(value * weight)
        tail += j_tail * abs(weight)
    ratio = math.exp(-2.0 * math.pi * (tau.y - z.y))
    if N > 0 and ratio < 1.0:
        tail += abs(terms[-1]) * ratio / (1.0 - ratio)
    if tol is not None and tail > tol:
        raise PrecisionError(f"[Series] Хвост H_z(τ) {tail:.3e} выше допуска {tol:.1e}")
    return complex_fsum(terms)


def akn_closed_form(z: UpperHalfPoint, tau: UpperHalfPoint, N: int = qseries.DEFAULT_PRECISION) -> complex:
    """((1/2πi)·j′(τ))/(j(z) − j(τ))"""
    j = qseries.klein_j(N)
    j_z, _ = qseries.evaluate_q(j, z)
    j_tau, _ = qseries.evaluate_q(j, tau)
    dj_tau, _ = qseries.evaluate_q(j.derivative(), tau)
    denominator = j_z - j_tau
    if abs(denominator) <= 1e-9 * max(1.0, abs(j_z), abs(j_tau)):
        raise PoleError(f"[Series] j(z) = j(τ): точки {z} и {tau} эквивалентны")
    return dj_tau / denominator


RHO = UpperHalfPoint(-0.5, math.sqrt(3) / 2)


def h_at_rho(tau: UpperHalfPoint, N: int = 16, tol: Optional[float] = None) -> complex:
    """
    H_ρ(τ) = Σ_{n ≤ N} j_n(ρ)e^{2πinτ}, где j_n(ρ) = P_n(0) точные целые
    из многочленов Фабера (j(ρ) = 0).
    """
    if tau.y <= RHO.y:
        raise ParameterError(f"Нужно Im τ > √3/2, получено v={tau.y}")
    polys = qseries.faber_polynomials(N)
    terms = [float(polys[n][0]) * cmath.exp(2j * math.pi * n * tau.z) for n in range(N + 1)]
    ratio = math.exp(-2.0 * math.pi * (tau.y - RHO.y))
    tail = abs(terms[-1]) * ratio / (1.0 - ratio) if N > 0 else math.inf
    if tol is not None and tail > tol:
        raise PrecisionError(f"[Series] Хвост H_ρ(τ) {tail:.3e} выше допуска {tol:.1e}")
    return complex_fsum(terms)


def _checked_f(p: SeriesParams, z: UpperHalfPoint) -> Dict[str, TruncatedValue]:
    values = hyperbolic_values(p, z)
    if abs(values["f"].value) <= CONDITION_FLOOR * p.tol:
        raise IllConditionedPointError(
            f"[Series] |f_{{{p.k},{p.D}}}({z})| = {abs(values['f'].value):.3e} слишком мало"
        )
    return values


def divisor_form_bko(p: SeriesParams, z: UpperHalfPoint, N: int = qseries.DEFAULT_PRECISION) -> complex:
    """(k/6)·E_2(z) − (1/2πi)·f′/f"""
    values = _checked_f(p, z)
    e2, _ = qseries.evaluate_q(qseries.eisenstein(2, N), z)
    return (p.k / 6.0) * e2 - values["fprime"].value / (2j * math.pi * values["f"].value)


def divisor_form_thm(p: SeriesParams, z: UpperHalfPoint, N: int = qseries.DEFAULT_PRECISION) -> complex:
    """(k/2π)·ω/f + (k/6)·E_2*"""
    values = _checked_f(p, z)
    return (p.k / (2.0 * math.pi)) * values["omega"].value / values["f"].value \
        + (p.k / 6.0) * e2_star(z, N)


def first_nonvanishing_coefficient(p: SeriesParams, y: float = 1.0, M: int = 32,
                                   n_max: int = 8) -> Tuple[int, complex]:
    """Первый n с |c_f(n)| > 1e−8·max(1, |c_f(1)|)"""
    from src.core.lift import fourier_coefficient

    evaluator = lambda w: f_hyperbolic(p, w).value
    first = None
    for n in range(1, n_max + 1):
        coeff = fourier_coefficient(evaluator, n, y, M)
        if first is None:
            first = coeff
        if abs(coeff) > 1e-8 * max(1.0, abs(first)):
            return n, coeff
    raise ConvergenceError(f"[Series] Коэффициенты f_{{{p.k},{p.D}}} до n={n_max} равны нулю")


# --- ряды Пуанкаре экспоненциального типа ------------------------------------

@lru_cache(maxsize=64)
def _cosets(c_max: int, d_reach: int) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Представители Γ_∞\\SL2(Z) с 1 ≤ c ≤ c_max, |d| ≤ c·d_reach: массивы (a mod c, c, d)"""
    a_list, c_list, d_list = [], [], []
    for c in range(1, c_max + 1):
        for d in range(-c * d_reach, c * d_reach + 1):
            if math.gcd(c, d) != 1:
                continue
            a_list.append(pow(d, -1, c) if c > 1 else 0)
            c_list.append(c)
            d_list.append(d)
    return np.array(a_list), np.array(c_list), np.array(d_list)


class PoincareSeries:
    """P_{κ,m}(z) = Σ_{γ ∈ Γ_∞\\SL2(Z)} e^{2πimz}|_κ γ, усечённый по c ≤ c_max"""

    def __init__(self, kappa: int, m: int, c_max: int = 24, d_window: int = 8):
        if kappa < 8 or kappa % 2:
            raise ParameterError(f"Вес κ={kappa} должен быть чётным и ≥ 8")
        if m < 1:
            raise ParameterError(f"Индекс m={m} должен быть ≥ 1")
        self.kappa = kappa
        self.m = m
        self.c_max = c_max
        self.d_window = d_window

    def _window(self, x_abs: float):
        reach = self.d_window + int(math.ceil(x_abs)) + 1
        return _cosets(self.c_max, reach)

    def evaluate(self, z: UpperHalfPoint) -> Tuple[complex, float]:
        """Значение и оценка хвоста по последнему слою c = c_max"""
        a, c, d = self._window(abs(z.x))
        inside = np.abs(c * z.x + d) <= c * self.d_window
        a, c, d = a[inside], c[inside], d[inside]
        w = c * z.z + d
        gz = a / c - 1.0 / (c * w)
        terms = w ** (-self.kappa) * np.exp(2j * math.pi * self.m * gz)
        value = cmath.exp(2j * math.pi * self.m * z.z) + complex_fsum(terms)
        shell = real_fsum(np.abs(terms[c == self.c_max]))
        tail = shell * self.c_max / (self.kappa - 2) \
            + 2.0 * self.d_window ** (1 - self.kappa) / (self.kappa - 1)
        return value, tail

    def evaluate_array(self, points: np.ndarray, block: int = 64) -> np.ndarray:
        """Векторное вычисление в массиве точек (для квадратур)"""
        points = np.asarray(points, dtype=complex)
        flat = points.ravel()
        a, c, d = self._window(float(np.max(np.abs(flat.real))) if flat.size else 0.0)
        out = np.empty(flat.shape, dtype=complex)
        for start in range(0, flat.size, block):
            zs = flat[start:start + block, None]
            w = c[None, :] * zs + d[None, :]
            inside = np.abs(c[None, :] * zs.real + d[None, :]) <= c[None, :] * self.d_window
            gz = a[None, :] / c[None, :] - 1.0 / (c[None, :] * w)
            terms = np.where(inside, w ** (-self.kappa) * np.exp(2j * math.pi * self.m * gz), 0)
            out[start:start + block] = np.exp(2j * math.pi * self.m * zs[:, 0]) + terms.sum(axis=1)
        return out.reshape(points.shape)


def poincare_exponential(kappa: int, m: int, z: UpperHalfPoint, c_max: int = 24,
                         tol: Optional[float] = None) -> complex:
    """P_{κ,m}(z); при хвосте выше tol PrecisionError"""
    value, tail = PoincareSeries(kappa, m, c_max).evaluate(z)
    if tol is not None and tail > tol:
        raise PrecisionError(f"[Series] c_max={c_max} мало для P_{{{kappa},{m}}}: хвост {tail:.3e}")
    return value
