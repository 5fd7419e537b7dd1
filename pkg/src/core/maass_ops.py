"""
Разностные дифференциальные операторы (∂/∂z̄, ξ_κ, Δ_κ), операторы слэша
целого и полуцелого веса с тэта-множителем и нужные для них символы.
"""
import cmath
import math
from typing import Callable, Dict, Optional

from src.core.qforms import cocycle, mobius
from src.errors import GroupElementError, ParameterError, RoughFunctionError
from src.models import GroupElement, UpperHalfPoint

SmoothFunction = Callable[[UpperHalfPoint], complex]

ROUGH_TOL = 1e-2


# --- символы -----------------------------------------------------------------

def jacobi(a: int, n: int) -> int:
    """Символ Якоби (a/n) для нечётного n > 0"""
    if n <= 0 or n % 2 == 0:
        raise ParameterError(f"Символ Якоби требует нечётного n > 0, получено {n}")
    a %= n
    result = 1
    while a:
        while a % 2 == 0:
            a //= 2
            if n % 8 in (3, 5):
                result = -result
        a, n = n, a
        if a % 4 == 3 and n % 4 == 3:
            result = -result
        a %= n
    return result if n == 1 else 0


def kronecker(c: int, d: int) -> int:
    """Расширенный символ Кронекера (c/d)"""
    if d == 0:
        return 1 if abs(c) == 1 else 0
    result = 1
    if d < 0:
        d = -d
        if c < 0:
            result = -1
    while d % 2 == 0:
        d //= 2
        if c % 2 == 0:
            return 0
        if c % 8 in (3, 5):
            result = -result
    if d == 1:
        return result
    return result * jacobi(c, d)


def eps(d: int) -> complex:
    """ε_d = 1 при d ≡ 1, i при d ≡ 3 (mod 4); для отрицательных d по вычету"""
    if d % 2 == 0:
        raise ParameterError(f"ε_d определено только для нечётных d, получено {d}")
    return 1 if d % 4 == 1 else 1j


# --- слэш-операторы ----------------------------------------------------------

def _half_integral_twice(kappa: float) -> Optional[int]:
    """2κ, если κ полуцелое, иначе None"""
    twice = round(2 * kappa)
    if abs(2 * kappa - twice) > 1e-12:
        raise ParameterError(f"Вес κ={kappa} не целый и не полуцелый")
    return twice if twice % 2 else None


def normalize_gamma0_4(g: GroupElement) -> GroupElement:
    """Представитель ±γ ∈ Γ_0(4) с d > 0 (d = 1 при c = 0)"""
    if not g.in_gamma0(4):
        raise GroupElementError(f"{g.as_rows()} не лежит в Γ_0(4)")
    return -g if g.d < 0 else g


def automorphy_factor(kappa: float, g: GroupElement, z: UpperHalfPoint) -> complex:
    """Множитель перед F(γz): j(γ,z)^{−κ}, для полуцелого κ с (c/d)·ε_d^{2κ}"""
    twice = _half_integral_twice(kappa)
    if twice is None:
        return cocycle(g, z) ** (-int(round(kappa)))
    g = normalize_gamma0_4(g)
    w = cocycle(g, z)
    return kronecker(g.c, g.d) * eps(g.d) ** (twice % 4) * cmath.exp(-kappa * cmath.log(w))


def slash(kappa: float, g: GroupElement, F: SmoothFunction, z: UpperHalfPoint) -> complex:
    """(F|_κ γ)(z)"""
    return automorphy_factor(kappa, g, z) * F(mobius(g, z))


def slashed(kappa: float, g: GroupElement, F: SmoothFunction) -> SmoothFunction:
    """Функция z ↦ (F|_κ γ)(z), для вложенных слэшей"""
    return lambda z: slash(kappa, g, F, z)


def theta_function(z: UpperHalfPoint, tol: float = 1e-13) -> complex:
    """θ(z) = Σ_{n∈Z} e^{2πin²z}"""
    q = cmath.exp(2j * math.pi * z.z)
    abs_q = abs(q)
    total = 1 + 0j
    n = 1
    while True:
        term = q ** (n * n)
        total += 2 * term
        next_bound = 2 * abs_q ** ((n + 1) ** 2) / (1 - abs_q)
        if next_bound < tol:
            return total
        n += 1


# --- разностные производные --------------------------------------------------

def _step(z: UpperHalfPoint, h: Optional[float], scale: float) -> float:
    h = scale * max(1.0, z.y) if h is None else h
    if not 0 < 2 * h < z.y:
        raise ParameterError(f"Шаг h={h} слишком велик для y={z.y}")
    return h


def _shift(F: SmoothFunction, z: UpperHalfPoint, dx: float, dy: float) -> complex:
    return F(UpperHalfPoint(z.x + dx, z.y + dy))


def _first_derivatives(F: SmoothFunction, z: UpperHalfPoint, h: float):
    """F_x, F_y разностями четвёртого порядка"""
    def central(dx, dy):
        return (-_shift(F, z, 2 * dx, 2 * dy) + 8 * _shift(F, z, dx, dy)
                - 8 * _shift(F, z, -dx, -dy) + _shift(F, z, -2 * dx, -2 * dy)) / (12 * h)
    return central(h, 0.0), central(0.0, h)


def _check_rough(coarse: complex, fine: complex, rough_tol: float, what: str) -> None:
    if abs(coarse - fine) > rough_tol * (1.0 + abs(fine)):
        raise RoughFunctionError(
            f"{what}: оценки при h и h/2 расходятся на {abs(coarse - fine):.3e}"
        )


def wirtinger_dzbar(F: SmoothFunction, z: UpperHalfPoint, h: Optional[float] = None,
                    rough_tol: float = ROUGH_TOL) -> complex:
    """∂F/∂z̄ = (F_x + iF_y)/2 с экстраполяцией Ричардсона по шагам h и h/2"""
    h = _step(z, h, 1e-3)
    fx_h, fy_h = _first_derivatives(F, z, h)
    fx_2, fy_2 = _first_derivatives(F, z, h / 2)
    coarse = (fx_h + 1j * fy_h) / 2
    fine = (fx_2 + 1j * fy_2) / 2
    _check_rough(coarse, fine, rough_tol, "∂/∂z̄")
    return (16 * fine - coarse) / 15


def xi(kappa: float, F: SmoothFunction, z: UpperHalfPoint, h: Optional[float] = None,
       rough_tol: float = ROUGH_TOL) -> complex:
    """ξ_κ F = 2i·y^κ·conj(∂F/∂z̄)"""
    return 2j * z.y ** kappa * wirtinger_dzbar(F, z, h, rough_tol).conjugate()


def xi_operator(kappa: float, F: SmoothFunction, h: Optional[float] = None) -> SmoothFunction:
    return lambda w: xi(kappa, F, w, h)


def _second_order(F: SmoothFunction, z: UpperHalfPoint, h: float) -> Dict[str, complex]:
    centre = F(z)
    east, west = _shift(F, z, h, 0.0), _shift(F, z, -h, 0.0)
    north, south = _shift(F, z, 0.0, h), _shift(F, z, 0.0, -h)
    ne, nw = _shift(F, z, h, h), _shift(F, z, -h, h)
    se, sw = _shift(F, z, h, -h), _shift(F, z, -h, -h)
    return {
        "x": (east - west) / (2 * h),
        "y": (north - south) / (2 * h),
        "xx": (east - 2 * centre + west) / (h * h),
        "yy": (north - 2 * centre + south) / (h * h),
        "xy": (ne - nw - se + sw) / (4 * h * h),
    }


def second_derivatives(F: SmoothFunction, z: UpperHalfPoint, h: Optional[float] = None,
                       rough_tol: float = ROUGH_TOL) -> Dict[str, complex]:
    """F_x, F_y, F_xx, F_yy, F_xy центральными разностями, Ричардсон (4·D(h/2) − D(h))/3"""
    h = _step(z, h, 5e-3)
    coarse = _second_order(F, z, h)
    fine = _second_order(F, z, h / 2)
    _check_rough(coarse["xx"] + coarse["yy"], fine["xx"] + fine["yy"], rough_tol, "F_xx + F_yy")
    return {key: (4 * fine[key] - coarse[key]) / 3 for key in fine}


def laplacian(kappa: float, F: SmoothFunction, z: UpperHalfPoint, h: Optional[float] = None,
              rough_tol: float = ROUGH_TOL) -> complex:
    """Δ_κ F = −y²(F_xx + F_yy) + iκy(F_x + iF_y)"""
    d = second_derivatives(F, z, h, rough_tol)
    y = z.y
    return -y * y * (d["xx"] + d["yy"]) + 1j * kappa * y * (d["x"] + 1j * d["y"])
