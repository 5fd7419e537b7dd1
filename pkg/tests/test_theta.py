import math

import numpy as np
import pytest

from src.core import theta
from src.core.jets import Jet2
from src.errors import GroupElementError, ParameterError
from src.models import GroupElement, UpperHalfPoint

Z = UpperHalfPoint(0.1, 1.2)


def test_jet_product_rule():
    """Тест: градиент и гессиан x·y + z²"""
    x, y, z = Jet2.variables((2.0, 3.0, -1.0))
    jet = x * y + z * z
    assert jet.value == 7
    assert np.allclose(jet.grad, [3, 2, -2])
    assert np.allclose(jet.hess, [[0, 1, 0], [1, 0, 0], [0, 0, 2]])


def test_jet_power_and_division():
    """Тест: d²/dx² x^{5/2} = (15/4)x^{1/2}, (1/x)″ = 2/x³"""
    x, _, _ = Jet2.variables((4.0, 0.0, 0.0))
    power = x ** 2.5
    assert abs(power.value - 32) < 1e-12
    assert abs(power.hess[0, 0] - 15 / 4 * 2) < 1e-12
    inverse = 1 / x
    assert abs(inverse.hess[0, 0] - 2 / 64) < 1e-15


def test_jet_power_at_zero():
    x, _, _ = Jet2.variables((0.0, 1.0, 1.0))
    with pytest.raises(ZeroDivisionError):
        x ** 0.5


def test_lattice_identities():
    """Тест: A·A^{−1} = I точно и q(w) = (1/2)wᵀAw"""
    product = theta.gram_product()
    assert product == tuple(tuple(1 if i == j else 0 for j in range(3)) for i in range(3))
    for w in ((1, 3, 1), (2, -5, 7), (0, 1, 0)):
        assert theta.gram_form(w) == theta.quadratic_form(w)


def test_isotropy_of_s():
    """Тест: ⟨s, s̄⟩ = 2y², ⟨s, s⟩ = 0"""
    s = theta.s_vector(Z)
    assert abs(theta.isotropy_pairing(Z) - 2 * Z.y ** 2) < 1e-14
    assert abs(theta.bilinear(s, s)) < 1e-14


@pytest.mark.parametrize("k, z, w", [
    (6, UpperHalfPoint(0.2, 1.3), (1.0, 3.0, 1.0)),
    (8, UpperHalfPoint(0.0, 1.0), (0.5, 2.5, -1.0)),
    (4, UpperHalfPoint(-0.3, 0.7), (2.0, -1.5, -0.25)),
])
def test_vigneras_equation(k, z, w):
    """Тест: (E − Δ/4π)p = (k − 1)p"""
    assert theta.vigneras_relative_residual(k, z, w) < 1e-10


def test_vigneras_zero_branch():
    """Тест: p = 0 при q(w) ≤ 0 и на геодезической Q_z = 0"""
    assert theta.vigneras_p(6, Z, (0.0, 0.0, 1.0)) == 0
    assert theta.vigneras_p(6, UpperHalfPoint(0.0, 1.0), (1.0, 1.0, -1.0)) == 0
    assert theta.vigneras_residual(6, Z, (1.0, 0.0, 1.0)) == 0
    assert theta.vigneras_relative_residual(6, Z, (1.0, 0.0, 1.0)) == 0.0


def test_vigneras_rejects_light_cone():
    with pytest.raises(ParameterError):
        theta.vigneras_residual(6, Z, (1.0, 2.0, 1.0))


def test_vigneras_homogeneity():
    """Тест: p(2w) = 4^{(k−1)/2}p(w) = 32·p(w) при k = 6"""
    w = (1.0, 3.0, 1.0)
    base = theta.vigneras_p(6, Z, w)
    scaled = theta.vigneras_p(6, Z, tuple(2 * t for t in w))
    assert abs(scaled - 32 * base) < 1e-12 * abs(base)


def test_hessian_exactly_symmetric():
    jet = theta.vigneras_jet(6, Z, (1.0, 3.0, 1.0))
    assert np.array_equal(jet.hess, jet.hess.T)


def test_hessian_symmetric_on_random_samples():
    """Тест: гессиан p побитово симметричен для всех весов и случайных w"""
    rng = np.random.default_rng([42, 4])
    for k in (4, 6, 8):
        for _ in range(30):
            w = tuple(rng.uniform(-3.0, 3.0, 3))
            if theta.quadratic_form(w) <= theta.SMOOTHNESS_DELTA:
                continue
            z = UpperHalfPoint(float(rng.uniform(-0.5, 0.5)), float(rng.uniform(0.5, 2.0)))
            jet = theta.vigneras_jet(k, z, w)
            assert np.array_equal(jet.hess, jet.hess.T)


def test_jet_mirrors_upper_triangle():
    hess = np.array([[1, 2, 3], [2.0000001, 5, 6], [3, 6, 9]], dtype=complex)
    jet = Jet2(0, np.zeros(3), hess)
    assert np.array_equal(jet.hess, jet.hess.T)
    assert jet.hess[1, 0] == 2


def test_kernel_is_periodic():
    """Тест: Λ_k(τ + 1) = Λ_k(τ)"""
    kernel = theta.ThetaKernel(6, Z, 20, 1e-8, 0.5, "omega")
    tau = UpperHalfPoint(0.3, 0.5)
    assert abs(kernel(UpperHalfPoint(1.3, 0.5)) - kernel(tau)) < 1e-10


def test_kernel_coefficient_extraction():
    """Тест: трапеции по периоду возвращают D^{k−1/2}ω(z)e^{−2πDv}"""
    v = 0.5
    kernel = theta.ThetaKernel(6, Z, 20, 1e-8, v, "omega")
    extracted = kernel.fourier_coefficient(5, v)
    expected = kernel.coefficient(5) * math.exp(-2 * math.pi * 5 * v)
    assert abs(extracted - expected) < 1e-12
    assert kernel.coefficient(7) == 0


def test_plus_space_support():
    """Тест: при n ≡ 2, 3 (mod 4) коэффициенты Λ_k нулевые"""
    assert theta.plus_space_violations(6, Z, 0.5, 20) == []
    coefficients = theta.plus_space_coefficients(6, Z, 0.5, 20)
    assert abs(coefficients[7]) < 1e-9


def test_kernel_rejects_low_tau():
    kernel = theta.ThetaKernel(6, Z, 20, 1e-8, 0.5, "omega")
    with pytest.raises(ParameterError):
        kernel(UpperHalfPoint(0.0, 0.3))


def test_kernel_kind_validated():
    with pytest.raises(ParameterError):
        theta.ThetaKernel(6, Z, 20, 1e-8, 0.5, "holomorphic")


def test_modularity_outside_gamma0_4():
    with pytest.raises(GroupElementError):
        theta.half_integral_modularity_residual(6, GroupElement(0, -1, 1, 0), UpperHalfPoint(0.0, 1.0), Z)


@pytest.mark.slow
def test_half_integral_modularity_on_isometric_circle():
    """Тест: Λ_k|_{k+1/2}[[1,0],[4,1]] = Λ_k в точке окружности −1/4 + e^{iθ}/4"""
    tau = UpperHalfPoint(-0.25, 0.25)
    residual = theta.half_integral_modularity_residual(6, GroupElement(1, 0, 4, 1), tau, Z, 40)
    assert residual < 1e-5


@pytest.mark.slow
def test_weight_four_kernels_vanish():
    tau = UpperHalfPoint(0.1, 0.2)
    assert abs(theta.omega_kernel(4, tau, Z, 40)) < 1e-5
    assert abs(theta.lambda_kernel(4, tau, Z, 40)) < 1e-5
