"""
Скалярные произведения Петерссона квадратурой по фундаментальной области,
извлечение коэффициентов Фурье и покомпонентная проверка тэта-лифта.
"""
import math
from typing import Callable, Dict, Optional, Tuple

import numpy as np
from scipy import integrate
from scipy.special import gamma

from src.core import qseries
from src.core.maass_ops import SmoothFunction
from src.core.qforms import validate_discriminant
from src.core.series import PoincareSeries, hyperbolic_values
from src.core.theta import ThetaKernel
from src.errors import ConvergenceError, PrecisionError
from src.models import QuadratureGrid, SeriesParams, UpperHalfPoint, VerificationReport
from src.utils.logger import logger

ArrayFunction = Callable[[np.ndarray], np.ndarray]

THEOREM_SCOPE_NOTE = (
    "Проверка тэта-лифта по шагам доказательства: извлечение D-го коэффициента Λ_k, "
    "интеграл Меллина и симметрия b ↦ −b; проекция в плюс-пространство и P^+ не строятся"
)


def vectorize(F: SmoothFunction) -> ArrayFunction:
    """Поточечная функция как функция массива комплексных точек"""
    def evaluate(points: np.ndarray) -> np.ndarray:
        flat = np.asarray(points, dtype=complex).ravel()
        out = np.array([F(UpperHalfPoint(float(p.real), float(p.imag))) for p in flat], dtype=complex)
        return out.reshape(np.shape(points))
    return evaluate


def delta_evaluator(N: int = qseries.DEFAULT_PRECISION) -> ArrayFunction:
    series = qseries.delta(N)
    return lambda points: qseries.evaluate_array(series, points)


def f_evaluator(p: SeriesParams) -> SmoothFunction:
    return lambda z: hyperbolic_values(p, z)["f"].value


def omega_evaluator(p: SeriesParams) -> SmoothFunction:
    return lambda z: hyperbolic_values(p, z)["omega"].value


def fourier_coefficient(F: SmoothFunction, n: int, y: float, M: int = 32,
                        alias_tol: Optional[float] = None) -> complex:
    """
    e^{2πny}·(1/M)·Σⱼ F(xⱼ + iy)e^{−2πinxⱼ}: n-й коэффициент голоморфного
    ряда Фурье, измеренный на высоте y. При alias_tol сравнивается с 2M узлами.
    """
    def trapezoid(nodes: int) -> complex:
        xs = np.arange(nodes) / nodes
        values = np.array([F(UpperHalfPoint(float(x), y)) for x in xs], dtype=complex)
        return complex(np.mean(values * np.exp(-2j * math.pi * n * xs))) * math.exp(2 * math.pi * n * y)

    coarse = trapezoid(M)
    if alias_tol is not None:
        fine = trapezoid(2 * M)
        if abs(fine - coarse) > alias_tol * max(1.0, abs(fine)):
            raise PrecisionError(f"[Lift] Наложение частот: M={M} и {2 * M} расходятся на {abs(fine - coarse):.3e}")
        return fine
    return coarse


def _integrand_rows(kappa: int, F: ArrayFunction, G: ArrayFunction, y: float, xs: np.ndarray) -> np.ndarray:
    points = xs + 1j * y
    return F(points) * np.conj(G(points)) * y ** (kappa - 2)


def petersson_product(kappa: int, F: ArrayFunction, G: ArrayFunction,
                      grid: QuadratureGrid) -> Tuple[complex, float]:
    """
    (1/index)·∫ F·conj(G)·y^κ dx dy/y² по фундаментальной области, усечённой на Y.
    Хвост выше Y оценивается по экспоненциальному убыванию подынтегрального выражения.
    """
    points, weights = grid.points()
    values = F(points) * np.conj(G(points)) * points.imag ** (kappa - 2)
    total = complex(np.sum(values * weights)) / grid.index

    xs = grid.x_nodes
    top = abs(complex(np.sum(grid.x_weights * _integrand_rows(kappa, F, G, grid.cutoff, xs))))
    below = abs(complex(np.sum(grid.x_weights * _integrand_rows(kappa, F, G, grid.cutoff - 1.0, xs))))
    if top == 0.0:
        tail = 0.0
    elif below <= top:
        raise ConvergenceError(f"[Lift] Подынтегральное выражение не убывает на высоте Y={grid.cutoff}")
    else:
        rate = math.log(below / top)
        tail = top / rate / grid.index
    logger.debug(f"[Lift] Скалярное произведение веса {kappa}: {total:.6e}, хвост {tail:.3e}")
    return total, tail


def coefficient_formula_ratio(m: int, grid: Optional[QuadratureGrid] = None, c_max: int = 24) -> complex:
    """⟨Δ, P_{12,m}⟩·(4πm)^{11}/Γ(11), должно совпасть с m-м коэффициентом Δ"""
    grid = grid or QuadratureGrid.standard()
    poincare = PoincareSeries(12, m, c_max)
    value, _ = petersson_product(12, delta_evaluator(), poincare.evaluate_array, grid)
    return value * (4 * math.pi * m) ** 11 / gamma(11)


def poincare_pairing_ratio(F: ArrayFunction, kappa: int = 12, grid: Optional[QuadratureGrid] = None,
                           c_max: int = 24) -> complex:
    """⟨F, P_{κ,2}⟩ / ⟨F, P_{κ,1}⟩ = (c(2)/c(1))·(1/2)^{κ−1}"""
    grid = grid or QuadratureGrid.standard()
    first, _ = petersson_product(kappa, F, PoincareSeries(kappa, 1, c_max).evaluate_array, grid)
    second, _ = petersson_product(kappa, F, PoincareSeries(kappa, 2, c_max).evaluate_array, grid)
    return second / first


def mellin_weight_integral(k: int, D: int, epsrel: float = 1e-13) -> Tuple[float, float, float]:
    """
    ∫₀^∞ v^{k+1/2}e^{−4πDv} dv/v² подстановкой t = 4πDv; возвращает
    (квадратура, Γ(k − 1/2)/(4πD)^{k−1/2}, относительная невязка).
    """
    scale = (4 * math.pi * D) ** (k - 0.5)
    integrand = lambda t: t ** (k - 1.5) * math.exp(-t)
    split = 4.0 * k + 40.0
    body, _ = integrate.quad(integrand, 0.0, split, epsabs=0.0, epsrel=epsrel, limit=200)
    tail, _ = integrate.quad(integrand, split, math.inf, epsabs=0.0, epsrel=epsrel, limit=200)
    numeric = (body + tail) / scale
    closed = gamma(k - 0.5) / scale
    return numeric, closed, abs(numeric - closed) / abs(closed)


def lift_constant(k: int) -> float:
    """Γ(k − 1/2)/(6·(4π)^{k−1/2})"""
    return gamma(k - 0.5) / (6 * (4 * math.pi) ** (k - 0.5))


def theta_lift_components(k: int, D: int, z: UpperHalfPoint, params: Optional[Dict] = None) -> VerificationReport:
    """Отчёт по компонентам: извлечение коэффициента, Меллин, симметрия, правая часть"""
    params = dict(params or {})
    validate_discriminant(D)
    tol = params.get("tol", 1e-10)
    v = params.get("v", 0.2)
    d_max = params.get("d_max", 40)
    nodes = params.get("nodes", 256)
    tolerances = {
        "extraction": params.get("extraction_tol", 1e-7),
        "mellin": params.get("mellin_tol", 1e-10),
        "symmetry": params.get("symmetry_tol", 1e-9),
    }

    p = SeriesParams(k, D, tol)
    omega_z = hyperbolic_values(p, z)["omega"].value
    lam = ThetaKernel(k, z, d_max, params.get("kernel_tol", 1e-8), v, "omega")
    extracted = lam.fourier_coefficient(D, v, nodes)
    expected = lam.coefficient(D) * math.exp(-2 * math.pi * D * v)
    direct = D ** (k - 0.5) * omega_z * math.exp(-2 * math.pi * D * v)

    _, _, mellin = mellin_weight_integral(k, D)
    mirrored = hyperbolic_values(p, UpperHalfPoint(-z.x, z.y))["omega"].value
    residuals = {
        "extraction": max(abs(extracted - expected), abs(extracted - direct)),
        "mellin": mellin,
        "symmetry": abs(mirrored - omega_z.conjugate()),
    }
    rhs = lift_constant(k) * omega_z

    ratio = max(residuals[name] / tolerances[name] for name in residuals)
    notes = THEOREM_SCOPE_NOTE
    if abs(omega_z) < 1e-5 and abs(rhs) < 1e-5:
        notes += f"; при k={k} обе части обращаются в ноль"
    logger.info(f"[Lift] Компоненты лифта k={k}, D={D}: {residuals}")
    return VerificationReport.from_residual(
        "theorem3.lift_components", ratio, 1.0,
        params={"k": k, "D": D, "z": [z.x, z.y], "v": v, "d_max": d_max},
        notes=notes,
        values={
            "residuals": residuals,
            "tolerances": tolerances,
            "rhs": [rhs.real, rhs.imag],
            "extracted": [extracted.real, extracted.imag],
        },
    )
