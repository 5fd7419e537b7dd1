import math

import pytest

from src.core import qseries
from src.core.qforms import S, cocycle, mobius
from src.errors import IntegralityError, ParameterError, PrecisionError
from src.models import UpperHalfPoint


def coefficients(s, start, stop):
    return [int(s.coefficient(n)) for n in range(start, stop)]


def test_eisenstein_coefficients():
    """Тест: E_4 = 1 + 240q + 2160q² + ..., E_6 = 1 − 504q − 16632q² − ..."""
    assert coefficients(qseries.eisenstein(4), 0, 4) == [1, 240, 2160, 6720]
    assert coefficients(qseries.eisenstein(6), 0, 3) == [1, -504, -16632]
    assert coefficients(qseries.eisenstein(2), 0, 3) == [1, -24, -72]


def test_delta_coefficients():
    """Тест: τ(1..5) = 1, −24, 252, −1472, 4830"""
    assert coefficients(qseries.delta(), 1, 6) == [1, -24, 252, -1472, 4830]
    assert qseries.delta().valuation == 1


def test_klein_j_coefficients():
    j = qseries.klein_j()
    assert j.valuation == -1
    assert coefficients(j, -1, 4) == [1, 744, 196884, 21493760, 864299970]


def test_ramanujan_identity():
    """Тест: q·dE_2/dq = (E_2² − E_4)/12 точно"""
    e2, e4 = qseries.eisenstein(2), qseries.eisenstein(4)
    assert qseries.ramanujan_theta(e2) == (e2 * e2 - e4) / 12


def test_faber_basis_shape():
    """Тест: j_n = q^{−n} + O(q), коэффициенты целые"""
    for n, j_n in enumerate(qseries.faber_basis(5)):
        assert j_n.valuation == -n or n == 0
        assert j_n.coefficient(-n) == 1
        if n > 0:
            assert j_n.coefficient(0) == 0
            assert all(j_n.coefficient(m) == 0 for m in range(-n + 1, 0))
        assert j_n.is_integral()


def test_faber_two_polynomial():
    """Тест: j_2 = j² − 1488j + 159768 как многочлен и как q-ряд"""
    assert qseries.faber_polynomials(2)[2] == (159768, -1488, 1)
    j = qseries.klein_j()
    assert qseries.faber(2) == j * j - j.scale(1488) + 159768
    assert qseries.faber(2) == qseries.add(qseries.mul(j, j), qseries.scalar(j, -1488)) + 159768


def test_faber_values_at_elliptic_points():
    """Тест: j_1(i) = 1728 − 744, j_n(ρ) = P_n(0)"""
    assert qseries.faber_value(1, 1728) == 984
    assert qseries.faber_value(1, 0) == -744
    assert qseries.faber_value(2, 0) == 159768


def test_faber_values_stable_under_precision():
    """Тест: j_n(z) при точности N и 2N совпадают"""
    z = UpperHalfPoint(0.1, 1.0)
    for n in range(1, 4):
        coarse, _ = qseries.evaluate_q(qseries.faber(n, 32), z)
        fine, _ = qseries.evaluate_q(qseries.faber(n, 64), z)
        assert abs(coarse - fine) < 1e-8 * max(1.0, abs(fine))


def test_faber_negative_index_rejected():
    with pytest.raises(ParameterError):
        qseries.faber_polynomials(-1)


def test_j_at_elliptic_points():
    j = qseries.klein_j()
    value_i, tail_i = qseries.evaluate_q(j, UpperHalfPoint(0.0, 1.0))
    assert abs(value_i - 1728) < 1e-8
    assert tail_i < 1e-10

    rho = UpperHalfPoint(-0.5, 3 ** 0.5 / 2)
    value_rho, _ = qseries.evaluate_q(j, rho)
    assert abs(value_rho) < 1e-7


def test_delta_modularity():
    """Тест: Δ(−1/z) = z¹²Δ(z)"""
    z = UpperHalfPoint(0.3, 1.1)
    delta = qseries.delta()
    moved, _ = qseries.evaluate_q(delta, mobius(S, z))
    base, _ = qseries.evaluate_q(delta, z)
    assert abs(moved - cocycle(S, z) ** 12 * base) < 1e-10 * abs(moved)


def test_evaluate_array_matches_pointwise():
    delta = qseries.delta()
    z = UpperHalfPoint(0.1, 1.3)
    value, _ = qseries.evaluate_q(delta, z)
    array = qseries.evaluate_array(delta, [z.z])
    assert abs(array[0] - value) < 1e-14


def test_tail_bound_enforced():
    """Тест: слишком короткий ряд при малом y даёт PrecisionError"""
    with pytest.raises(PrecisionError):
        qseries.evaluate_q(qseries.klein_j(8), UpperHalfPoint(0.0, 0.3), tol=1e-10)


SERIES_BUILDERS = {
    "e2": lambda N: qseries.eisenstein(2, N),
    "delta": qseries.delta,
    "j": qseries.klein_j,
}


@pytest.mark.parametrize("name, N, y, reference_N", [
    ("e2", 24, 0.15, 200),
    ("e2", 24, 0.2, 200),
    ("delta", 24, 0.15, 200),
    ("j", 12, 0.5, 64),
])
def test_tail_bound_majorizes_truncation_error(name, N, y, reference_N):
    """Тест: оценка хвоста не меньше фактической ошибки усечения"""
    build = SERIES_BUILDERS[name]
    z = UpperHalfPoint(0.1, y)
    value, tail = qseries.evaluate_q(build(N), z)
    reference, _ = qseries.evaluate_q(build(reference_N), z)
    assert math.isfinite(tail)
    assert abs(value - reference) <= tail


def test_coefficient_beyond_precision():
    with pytest.raises(PrecisionError):
        qseries.delta(10).coefficient(10)


def test_integrality_guard():
    half = qseries.delta(5) / 2
    with pytest.raises(IntegralityError):
        half.require_integral("Δ/2")


def test_to_lines_format():
    assert qseries.delta(3).to_lines() == ["1:1", "2:-24"]
