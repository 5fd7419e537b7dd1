"""
Целочисленные бинарные квадратичные формы положительного дискриминанта.

Вычисление Q(z,1), геодезического инварианта Q_z, действия SL2(Z) и полное
перечисление форм с |Q(z,1)| ≤ R в каноническом порядке (|a|, a, |b|, b).
"""
import math
from typing import List, Tuple

import numpy as np

from src.errors import (
    DiscriminantError, GroupElementError, InputRangeError, SquareDiscriminantError,
)
from src.models import GroupElement, QForm, UpperHalfPoint
from src.utils.logger import logger

INT64_LIMIT = 2 ** 63 - 1
# коэффициенты, квадрат которых ещё помещается в int64 с запасом
COEFF_LIMIT = 2 ** 30

IDENTITY = GroupElement(1, 0, 0, 1)
S = GroupElement(0, -1, 1, 0)
T = GroupElement(1, 1, 0, 1)


def _checked(value: int) -> int:
    if abs(value) > INT64_LIMIT:
        raise InputRangeError(f"Значение {value} выходит за пределы 64-битного диапазона")
    return value


def discriminant(Q: QForm) -> int:
    """D = b² − 4ac"""
    return _checked(Q.b * Q.b - 4 * Q.a * Q.c)


def is_square(n: int) -> bool:
    return n >= 0 and math.isqrt(n) ** 2 == n


def is_discriminant(D: int) -> bool:
    return D > 0 and D % 4 in (0, 1)


def validate_discriminant(D: int, allow_square: bool = False) -> None:
    """Проверяет, что D является положительным дискриминант (и не квадрат, если не разрешено)"""
    if not is_discriminant(D):
        raise DiscriminantError(f"D={D} не является дискриминантом (нужно D > 0, D ≡ 0,1 mod 4)")
    if is_square(D) and not allow_square:
        raise SquareDiscriminantError(
            f"D={D} является квадратом; квадратные дискриминанты исключены (семейство a = 0)"
        )


def evaluate(Q: QForm, z: UpperHalfPoint) -> complex:
    """Q(z,1) = az² + bz + c"""
    x, y = z.x, z.y
    return complex(Q.a * (x * x - y * y) + Q.b * x + Q.c, y * (2 * Q.a * x + Q.b))


def geodesic_invariant(Q: QForm, z: UpperHalfPoint) -> float:
    """Q_z = (a|z|² + bx + c)/y"""
    x, y = z.x, z.y
    return (Q.a * (x * x + y * y) + Q.b * x + Q.c) / y


def z_derivative(Q: QForm, z: UpperHalfPoint) -> complex:
    """Q'(z,1) = 2az + b"""
    return complex(2 * Q.a * z.x + Q.b, 2 * Q.a * z.y)


def act(Q: QForm, g: GroupElement) -> QForm:
    """Правое действие (Q∘γ)(X,Y) = Q(aX + bY, cX + dY)"""
    if g.a * g.d - g.b * g.c != 1:
        raise GroupElementError(f"Матрица {g.as_rows()} не унимодулярна")
    qa, qb, qc = Q.a, Q.b, Q.c
    A = qa * g.a * g.a + qb * g.a * g.c + qc * g.c * g.c
    B = 2 * qa * g.a * g.b + qb * (g.a * g.d + g.b * g.c) + 2 * qc * g.c * g.d
    C = qa * g.b * g.b + qb * g.b * g.d + qc * g.d * g.d
    return QForm(_checked(A), _checked(B), _checked(C))


def compose(g: GroupElement, h: GroupElement) -> GroupElement:
    """Произведение gh в SL2(Z); Q∘(gh) = (Q∘g)∘h"""
    return g * h


def mobius(g: GroupElement, z: UpperHalfPoint) -> UpperHalfPoint:
    """γz = (az + b)/(cz + d)"""
    w = z.z
    return UpperHalfPoint.from_complex((g.a * w + g.b) / (g.c * w + g.d))


def cocycle(g: GroupElement, z: UpperHalfPoint) -> complex:
    """j(γ, z) = cz + d"""
    return g.c * z.z + g.d


def q_values(a, b, c, x: float, y: float) -> Tuple[np.ndarray, np.ndarray]:
    """Векторно: Q(z,1) и Q_z для массивов коэффициентов"""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    c = np.asarray(c, dtype=float)
    re = a * (x * x - y * y) + b * x + c
    im = y * (2.0 * a * x + b)
    qz = (a * (x * x + y * y) + b * x + c) / y
    return re + 1j * im, qz


def _int_range(lo: float, hi: float) -> np.ndarray:
    start, stop = math.ceil(lo), math.floor(hi)
    if stop < start:
        return np.empty(0, dtype=np.int64)
    return np.arange(start, stop + 1, dtype=np.int64)


def enumerate_bounded_arrays(D: int, z: UpperHalfPoint, R: float,
                             allow_square: bool = False) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """
    Все формы с b² − 4ac = D и |Q(z,1)| ≤ R как массивы (a, b, c) в каноническом порядке.

    Так как |Q(z,1)|² = y²(D + Q_z²), условие равносильно |y·Q_z| ≤ R' = √(R² − Dy²), а при a ≠ 0
    y·Q_z = ((2ax + b)² + 4a²y² − D)/(4a). Отсюда |a| ≤ (R + R')/(2y²) и для
    каждого a величина (2ax + b)² лежит в отрезке D − 4a²y² ± 4|a|R'.
    """
    validate_discriminant(D, allow_square)
    x, y = z.x, z.y
    empty = np.empty(0, dtype=np.int64)
    if R * R < D * y * y:
        return empty, empty, empty

    r_prime = math.sqrt(max(0.0, R * R - D * y * y))
    a_max = int(math.floor((R + r_prime) / (2.0 * y * y))) + 1
    b_reach = math.sqrt(D + 4.0 * a_max * r_prime) + 2.0 * a_max * abs(x) + 2
    if a_max > COEFF_LIMIT or b_reach > COEFF_LIMIT:
        raise InputRangeError(f"Радиус R={R} при y={y} требует коэффициентов вне диапазона")

    parity = D % 2
    chunks_a, chunks_b, chunks_c = [], [], []

    for a in range(-a_max, a_max + 1):
        if a == 0:
            continue
        spread = 4.0 * abs(a) * r_prime
        base = D - 4.0 * a * a * y * y
        hi = base + spread
        if hi < 0:
            continue
        t_hi = math.sqrt(hi) + 1e-9 * (1.0 + math.sqrt(abs(hi)))
        t_lo = math.sqrt(base - spread) - 1.0 if base - spread > 1.0 else 0.0
        centre = -2.0 * a * x
        if t_lo > 0:
            b = np.concatenate([_int_range(centre - t_hi, centre - t_lo),
                                _int_range(centre + t_lo, centre + t_hi)])
        else:
            b = _int_range(centre - t_hi, centre + t_hi)
        b = b[(b % 2) == parity]
        if b.size == 0:
            continue
        num = b * b - D
        denom = 4 * a
        keep = (num % denom) == 0
        if not keep.any():
            continue
        b = b[keep]
        chunks_a.append(np.full(b.size, a, dtype=np.int64))
        chunks_b.append(b)
        chunks_c.append(num[keep] // denom)

    if is_square(D) and allow_square:
        root = math.isqrt(D)
        for b0 in (root, -root):
            c = _int_range(-b0 * x - r_prime - 1e-9, -b0 * x + r_prime + 1e-9)
            chunks_a.append(np.zeros(c.size, dtype=np.int64))
            chunks_b.append(np.full(c.size, b0, dtype=np.int64))
            chunks_c.append(c)

    if not chunks_a:
        return empty, empty, empty

    a_arr = np.concatenate(chunks_a)
    b_arr = np.concatenate(chunks_b)
    c_arr = np.concatenate(chunks_c)

    q, _ = q_values(a_arr, b_arr, c_arr, x, y)
    inside = (q.real ** 2 + q.imag ** 2) <= R * R * (1.0 + 1e-12)
    a_arr, b_arr, c_arr = a_arr[inside], b_arr[inside], c_arr[inside]

    order = np.lexsort((c_arr, np.abs(c_arr), b_arr, np.abs(b_arr), a_arr, np.abs(a_arr)))
    logger.debug(f"[QForms] D={D}, z={z}, R={R:.4g}: найдено форм {order.size}")
    return a_arr[order], b_arr[order], c_arr[order]


def enumerate_bounded(D: int, z: UpperHalfPoint, R: float, allow_square: bool = False) -> List[QForm]:
    """Формы дискриминанта D с |Q(z,1)| ≤ R (граница включается)"""
    a, b, c = enumerate_bounded_arrays(D, z, R, allow_square)
    return [QForm(int(ai), int(bi), int(ci)) for ai, bi, ci in zip(a, b, c)]


def form_rows(forms: List[QForm], z: UpperHalfPoint) -> List[dict]:
    """Строки для CSV: a,b,c,re(Q),im(Q),Qz"""
    rows = []
    for Q in forms:
        value = evaluate(Q, z)
        rows.append({
            "a": Q.a, "b": Q.b, "c": Q.c,
            "re(Q)": value.real, "im(Q)": value.imag,
            "Qz": geodesic_invariant(Q, z),
        })
    return rows
