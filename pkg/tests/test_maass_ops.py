import cmath
import math

import pytest

from src.core import maass_ops
from src.core.maass_ops import (
    eps, jacobi, kronecker, laplacian, normalize_gamma0_4, slash, slashed, theta_function, wirtinger_dzbar, xi,
    xi_operator,
)
from src.core.qforms import compose, evaluate, geodesic_invariant
from src.errors import GroupElementError, ParameterError, RoughFunctionError
from src.models import GroupElement, QForm, UpperHalfPoint


@pytest.mark.parametrize("a, n, expected", [
    (1, 3, 1), (2, 3, -1), (2, 7, 1), (3, 5, -1), (5, 21, 1), (6, 9, 0), (-1, 7, -1),
])
def test_jacobi_symbol(a, n, expected):
    assert jacobi(a, n) == expected


def test_jacobi_requires_odd_modulus():
    with pytest.raises(ParameterError):
        jacobi(3, 8)


def test_kronecker_extension():
    """Тест: (c/d) для чётных и отрицательных d"""
    assert kronecker(4, 1) == 1
    assert kronecker(3, 2) == -1
    assert kronecker(4, 2) == 0
    assert kronecker(-1, -1) == -1
    assert kronecker(1, 0) == 1


def test_eps_values():
    assert eps(1) == 1
    assert eps(3) == 1j
    assert eps(-1) == 1j
    assert eps(-3) == 1
    with pytest.raises(ParameterError):
        eps(2)


def test_normalize_gamma0_4():
    g = GroupElement(-1, 0, -4, -1)
    assert normalize_gamma0_4(g) == GroupElement(1, 0, 4, 1)
    with pytest.raises(GroupElementError):
        normalize_gamma0_4(GroupElement(0, -1, 1, 0))


def test_theta_multiplier():
    """Тест: θ|_{1/2}γ = θ для γ ∈ Γ_0(4)"""
    z = UpperHalfPoint(0.13, 0.6)
    for g in (GroupElement(1, 0, 4, 1), GroupElement(1, 1, 0, 1), GroupElement(-3, 1, -4, 1),
              GroupElement(5, 1, 24, 5)):
        assert abs(slash(0.5, g, theta_function, z) - theta_function(z)) < 1e-9


def test_integral_weight_slash():
    F = lambda w: cmath.exp(2j * math.pi * w.z)
    z = UpperHalfPoint(0.2, 1.1)
    g = GroupElement(0, -1, 1, 0)
    assert abs(slash(4, g, F, z) - z.z ** (-4) * F(UpperHalfPoint.from_complex(-1 / z.z))) < 1e-14


def test_integral_slash_is_a_right_action():
    """Тест: (F|_κ g)|_κ h = F|_κ (gh) для функции без симметрий"""
    F = lambda w: cmath.exp(1j * w.z) * w.z ** 2
    z = UpperHalfPoint(0.15, 0.8)
    g, h = GroupElement(0, -1, 1, 0), GroupElement(2, 1, 1, 1)
    direct = slash(6, compose(g, h), F, z)
    nested = slash(6, h, slashed(6, g, F), z)
    assert abs(direct - nested) < 1e-12 * max(1.0, abs(direct))


def test_non_half_integral_weight_rejected():
    with pytest.raises(ParameterError):
        slash(0.3, GroupElement(1, 0, 4, 1), theta_function, UpperHalfPoint(0.0, 1.0))


def test_dzbar_of_holomorphic_vanishes():
    F = lambda w: cmath.exp(2j * math.pi * w.z)
    assert abs(wirtinger_dzbar(F, UpperHalfPoint(0.1, 1.0))) < 1e-9


def test_dzbar_of_y():
    """Тест: ∂y/∂z̄ = i/2"""
    F = lambda w: complex(w.y ** 2)
    z = UpperHalfPoint(0.1, 1.5)
    assert abs(wirtinger_dzbar(F, z) - 1j * z.y) < 1e-9


def test_xi_of_power_of_y():
    """Тест: ξ_κ(y^{1−κ}) = 1 − κ"""
    kappa = 4
    F = lambda w: complex(w.y ** (1 - kappa))
    z = UpperHalfPoint(0.0, 1.2)
    expected = 2j * z.y ** kappa * (0.5j * (1 - kappa) * z.y ** (-kappa)).conjugate()
    assert abs(xi(kappa, F, z) - expected) < 1e-8
    assert abs(expected - (1 - kappa)) < 1e-12


def test_laplacian_of_harmonic_example():
    """Тест: Δ_κ y^{1−κ} = 0, Δ_κ от голоморфной функции равен нулю"""
    kappa = 6
    z = UpperHalfPoint(0.2, 1.3)
    power = lambda w: complex(w.y ** (1 - kappa))
    holomorphic = lambda w: cmath.exp(2j * math.pi * w.z)
    assert abs(laplacian(kappa, power, z)) < 1e-6
    assert abs(laplacian(kappa, holomorphic, z)) < 1e-6


def test_laplacian_eigenfunction():
    """Тест: Δ_0 y^s = s(1 − s)y^s"""
    s = 2.5
    z = UpperHalfPoint(0.0, 1.4)
    F = lambda w: complex(w.y ** s)
    assert abs(laplacian(0, F, z) - s * (1 - s) * z.y ** s) < 1e-6


def test_step_too_large():
    with pytest.raises(ParameterError):
        wirtinger_dzbar(lambda w: 0j, UpperHalfPoint(0.0, 0.01), h=0.01)


def test_rough_function_detected():
    """Тест: функция с разрывом производной даёт RoughFunctionError"""
    kink = lambda w: complex(abs(w.x - 0.1) * 1e3)
    with pytest.raises(RoughFunctionError):
        wirtinger_dzbar(kink, UpperHalfPoint(0.1 + 1e-4, 1.0))


def test_second_derivatives_of_polynomial():
    F = lambda w: complex(w.x ** 2 * w.y + w.y ** 3)
    z = UpperHalfPoint(0.3, 1.2)
    d = maass_ops.second_derivatives(F, z)
    assert abs(d["xx"] - 2 * z.y) < 1e-8
    assert abs(d["yy"] - 6 * z.y) < 1e-8
    assert abs(d["xy"] - 2 * z.x) < 1e-8


def test_laplacian_of_inverse_y():
    """Тест: Δ_10(y^{−1}) = 8y^{−1}"""
    z = UpperHalfPoint(0.1, 1.3)
    F = lambda w: complex(1.0 / w.y)
    assert abs(laplacian(10, F, z) - 8.0 / z.y) < 1e-6


FORM = QForm(1, 3, 1)
SAMPLE = UpperHalfPoint(0.1, 1.2)


def single_form(w: UpperHalfPoint) -> complex:
    """Одно слагаемое ω_{7,5}: Q_z/Q(z,1)^7"""
    return geodesic_invariant(FORM, w) / evaluate(FORM, w) ** 7


def test_xi_of_single_form():
    """Тест: ξ_{2k+2}(Q_z/Q(z,1)^{k+1}) = −y^{2k}/Q(z̄,1)^k при k = 6"""
    expected = -SAMPLE.y ** 12 / evaluate(FORM, SAMPLE).conjugate() ** 6
    value = xi(14, single_form, SAMPLE)
    assert abs(value - expected) < 1e-7 * abs(expected)


def test_laplacian_factorises_through_xi():
    """Тест: Δ_κ = −ξ_{2−κ}ξ_κ на слагаемом ω_{7,5}"""
    q = evaluate(FORM, SAMPLE)
    dq = 2 * FORM.a * SAMPLE.z + FORM.b
    closed = 12 * q ** (-6) / SAMPLE.y - 12j * q ** (-7) * dq

    direct = laplacian(14, single_form, SAMPLE)
    composed = -xi(-12, xi_operator(14, single_form), SAMPLE)

    assert abs(direct - composed) < 1e-6 * abs(closed)
    assert abs(composed - closed) < 1e-6 * abs(closed)
