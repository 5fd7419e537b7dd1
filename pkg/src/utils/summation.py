"""
Компенсированное суммирование комплексных массивов.

Порядок слагаемых фиксируется вызывающим кодом (канонический порядок форм),
math.fsum даёт корректно округлённую сумму, поэтому результат не зависит
от разбиения работы.
"""
import math

import numpy as np


def complex_fsum(values) -> complex:
    """Точно округлённая сумма комплексного массива"""
    arr = np.asarray(values, dtype=complex)
    if arr.size == 0:
        return 0j
    return complex(math.fsum(arr.real.tolist()), math.fsum(arr.imag.tolist()))


def real_fsum(values) -> float:
    arr = np.asarray(values, dtype=float)
    if arr.size == 0:
        return 0.0
    return math.fsum(arr.tolist())
