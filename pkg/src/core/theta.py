"""
Тэта-ядра Ω_k и Λ_k по переменной τ, ядро Виньераса p с проверкой
дифференциального уравнения, носитель в плюс-пространстве и невязки
модулярности полуцелого веса для Λ_k.
"""
import math
from fractions import Fraction
from functools import lru_cache
from typing import Dict, List, Sequence, Tuple

import numpy as np

from src.core.jets import Jet2, value_of
from src.core.maass_ops import slash
from src.core.qforms import is_discriminant, mobius
from src.core.series import hyperbolic_values
from src.errors import GroupElementError, ParameterError, PrecisionError
from src.models import GroupElement, SeriesParams, UpperHalfPoint
from src.utils.logger import logger

# --- решётка Z³ с формой b² − 4ac ---------------------------------------------

DIMENSION = 3
LEVEL = 4
GRAM = ((0, 0, -4), (0, 2, 0), (-4, 0, 0))
GRAM_INVERSE = (
    (Fraction(0), Fraction(0), Fraction(-1, 4)),
    (Fraction(0), Fraction(1, 2), Fraction(0)),
    (Fraction(-1, 4), Fraction(0), Fraction(0)),
)
SMOOTHNESS_DELTA = 1e-3


def gram_product() -> Tuple[Tuple[Fraction, ...], ...]:
    """A·A^{−1} в рациональной арифметике"""
    return tuple(
        tuple(sum((GRAM[i][m] * GRAM_INVERSE[m][j] for m in range(DIMENSION)), Fraction(0))
              for j in range(DIMENSION))
        for i in range(DIMENSION)
    )


def quadratic_form(w: Sequence) -> float:
    a, b, c = w
    return b * b - 4 * a * c


def gram_form(w: Sequence) -> Fraction:
    """(1/2)·wᵀAw"""
    return Fraction(1, 2) * sum(
        GRAM[i][j] * w[i] * w[j] for i in range(DIMENSION) for j in range(DIMENSION)
    )


def eigenvalue(k: int) -> int:
    return k - 1


def s_vector(z: UpperHalfPoint) -> Tuple[complex, complex, complex]:
    w = z.z
    return 0.5, w, w * w / 2


def bilinear(u: Sequence, v: Sequence) -> complex:
    """⟨u, v⟩ = (1/2)·uᵀAv"""
    return 0.5 * sum(GRAM[i][j] * u[i] * v[j] for i in range(DIMENSION) for j in range(DIMENSION))


def isotropy_pairing(z: UpperHalfPoint) -> complex:
    """⟨s, s̄⟩ = |z|² − Re(z²) = 2y²"""
    s = s_vector(z)
    return bilinear(s, [complex(t).conjugate() for t in s])


# --- ядро Виньераса -----------------------------------------------------------

def vigneras_p(k: int, z: UpperHalfPoint, w):
    """
    p(a,b,c) = (b² − 4ac)^{k−1/2}·Q_z/Q(z,1)^{k+1} при b² − 4ac > 0, иначе 0.
    Принимает как вещественные тройки, так и тройки Jet2.
    """
    a, b, c = w
    disc = b * b - 4 * a * c
    if value_of(disc).real <= 0:
        return Jet2(0) if isinstance(disc, Jet2) else 0j
    x, y = z.x, z.y
    q_z = (a * (x * x + y * y) + b * x + c) / y
    q = a * (z.z * z.z) + b * z.z + c
    return disc ** (k - 0.5) * q_z * q ** (-(k + 1))


def vigneras_jet(k: int, z: UpperHalfPoint, w) -> Jet2:
    """Значение, градиент и гессиан p в точке w"""
    return Jet2.lift(vigneras_p(k, z, Jet2.variables(w)))


def vigneras_terms(k: int, z: UpperHalfPoint, w) -> Dict[str, complex]:
    jet = vigneras_jet(k, z, w)
    euler = complex(np.dot(np.asarray(w, dtype=float), jet.grad))
    d_ac = jet.hess[0, 2]
    d_bb = jet.hess[1, 1]
    laplace = -0.5 * d_ac + 0.5 * d_bb
    residual = euler - laplace / (4 * math.pi) - eigenvalue(k) * jet.value
    return {"p": jet.value, "euler": euler, "laplace": laplace, "residual": residual}


def vigneras_residual(k: int, z: UpperHalfPoint, w, delta: float = SMOOTHNESS_DELTA) -> complex:
    """(E − Δ^{(A)}/4π)p − (k − 1)·p; вблизи светового конуса |q(w)| ≤ δ точки отвергаются"""
    q = quadratic_form(w)
    if abs(q) <= delta:
        raise ParameterError(f"q(w) = {q:.3e} слишком близко к световому конусу")
    if q < 0:
        return 0j
    return vigneras_terms(k, z, w)["residual"]


def vigneras_relative_residual(k: int, z: UpperHalfPoint, w, delta: float = SMOOTHNESS_DELTA) -> float:
    """|невязка|/|p|; на геодезической Q_z = 0 и p, и невязка равны нулю"""
    if abs(quadratic_form(w)) <= delta:
        raise ParameterError("Точка слишком близко к световому конусу")
    if quadratic_form(w) < 0:
        return 0.0
    terms = vigneras_terms(k, z, w)
    if terms["p"] == 0:
        return 0.0 if terms["residual"] == 0 else math.inf
    return abs(terms["residual"]) / abs(terms["p"])


# --- тэта-ядра ----------------------------------------------------------------

class ThetaKernel:
    """
    Ω_k (kind="f") или Λ_k (kind="omega") как функция τ при фиксированном z:
    Σ_{0<D≤Dmax} D^{k−1/2}·g_D(z)·e^{2πiDτ}. Коэффициенты считаются один раз;
    квадратные D входят в сумму.
    """

    def __init__(self, k: int, z: UpperHalfPoint, d_max: int, tol: float = 1e-8,
                 v_min: float = 0.2, kind: str = "omega"):
        if kind not in ("f", "omega"):
            raise ParameterError(f"Неизвестный тип ядра {kind}")
        if v_min <= 0:
            raise ParameterError("v_min должно быть положительным")
        self.k, self.z, self.d_max, self.tol, self.v_min, self.kind = k, z, d_max, tol, v_min, kind
        self.discriminants = np.array([D for D in range(1, d_max + 1) if is_discriminant(D)])
        # коэффициенты считаются на сетке v с шагом 0.01 снизу, чтобы кэш работал для близких τ
        v_key = math.floor(v_min * 100) / 100 if v_min >= 0.02 else v_min
        self.coefficients = _kernel_coefficients(k, z.x, z.y, d_max, tol, v_key, kind)
        self._check_truncation()

    def _check_truncation(self) -> None:
        if not self.discriminants.size:
            return
        weights = self.discriminants ** (self.k - 0.5)
        scale = float(np.max(np.abs(self.coefficients) / weights))
        bound = self.d_max ** (self.k - 0.5) * scale * math.exp(-2 * math.pi * self.d_max * self.v_min)
        if bound > self.tol:
            raise PrecisionError(
                f"[Theta] Dmax={self.d_max} мало при v_min={self.v_min}: последний член {bound:.3e}"
            )
        logger.debug(f"[Theta] Ядро {self.kind}, k={self.k}, z={self.z}: оценка хвоста {bound:.3e}")

    def coefficient(self, D: int) -> complex:
        """D^{k−1/2}·g_D(z), ноль для недискриминантов"""
        hits = np.nonzero(self.discriminants == D)[0]
        return complex(self.coefficients[hits[0]]) if hits.size else 0j

    def evaluate_array(self, taus: np.ndarray) -> np.ndarray:
        taus = np.asarray(taus, dtype=complex)
        if np.any(taus.imag < self.v_min * (1 - 1e-12)):
            raise ParameterError(f"Im τ ниже v_min={self.v_min}")
        phases = np.exp(2j * math.pi * np.multiply.outer(taus, self.discriminants))
        return phases @ self.coefficients

    def __call__(self, tau: UpperHalfPoint) -> complex:
        return complex(self.evaluate_array(np.array([tau.z]))[0])

    def fourier_coefficient(self, n: int, v: float, nodes: int = 256) -> complex:
        """∫₀¹ K(u + iv)·e^{−2πinu} du трапециями по периоду"""
        u = np.arange(nodes) / nodes
        values = self.evaluate_array(u + 1j * v)
        return complex(np.mean(values * np.exp(-2j * math.pi * n * u)))


@lru_cache(maxsize=128)
def _kernel_coefficients(k: int, x: float, y: float, d_max: int, tol: float,
                         v_min: float, kind: str) -> np.ndarray:
    z = UpperHalfPoint(x, y)
    coefficients = []
    for D in range(1, d_max + 1):
        if not is_discriminant(D):
            continue
        weight = D ** (k - 0.5)
        damping = math.exp(-2 * math.pi * D * v_min)
        inner_tol = min(1e-4, max(1e-12, tol / (d_max * weight * damping)))
        values = hyperbolic_values(SeriesParams(k, D, inner_tol, allow_square=True), z)
        coefficients.append(weight * values[kind].value)
    return np.array(coefficients, dtype=complex)


def omega_kernel(k: int, tau: UpperHalfPoint, z: UpperHalfPoint, d_max: int = 40,
                 tol: float = 1e-8) -> complex:
    """Ω_k(τ, z) = Σ D^{k−1/2} f_{k,D}(z) e^{2πiDτ}"""
    return ThetaKernel(k, z, d_max, tol, tau.y, "f")(tau)


def lambda_kernel(k: int, tau: UpperHalfPoint, z: UpperHalfPoint, d_max: int = 40,
                  tol: float = 1e-8) -> complex:
    """Λ_k(τ, z) = Σ D^{k−1/2} ω_{k+1,D}(z) e^{2πiDτ}"""
    return ThetaKernel(k, z, d_max, tol, tau.y, "omega")(tau)


def plus_space_coefficients(k: int, z: UpperHalfPoint, v: float, d_max: int,
                            tol: float = 1e-8, nodes: int = 256) -> Dict[int, complex]:
    """Коэффициенты Λ_k при n ≡ 2, 3 (mod 4), n ≤ Dmax"""
    lam = ThetaKernel(k, z, d_max, tol, v, "omega")
    return {n: lam.fourier_coefficient(n, v, nodes) for n in range(1, d_max + 1) if n % 4 in (2, 3)}


def plus_space_violations(k: int, z: UpperHalfPoint, v: float, d_max: int,
                          tol: float = 1e-9, nodes: int = 256) -> List[int]:
    """Индексы вне плюс-пространства с заметным коэффициентом; ожидается пустой список"""
    coefficients = plus_space_coefficients(k, z, v, d_max, nodes=nodes)
    return [n for n, value in coefficients.items() if abs(value) > tol]


def half_integral_modularity_residual(k: int, g: GroupElement, tau: UpperHalfPoint, z: UpperHalfPoint,
                                      d_max: int = 40, tol: float = 1e-8) -> float:
    """|(Λ_k(·, z)|_{k+1/2} γ)(τ) − Λ_k(τ, z)|"""
    if not g.in_gamma0(LEVEL):
        raise GroupElementError(f"{g.as_rows()} не лежит в Γ_0(4)")
    image = mobius(g, tau)
    v_min = min(tau.y, image.y)
    lam = ThetaKernel(k, z, d_max, tol, v_min, "omega")
    residual = abs(slash(k + 0.5, g, lam, tau) - lam(tau))
    logger.debug(f"[Theta] γ={g.as_rows()}, τ={tau}: невязка {residual:.3e}")
    return residual
