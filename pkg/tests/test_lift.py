import math

import numpy as np
import pytest
from scipy.special import gamma

from src.core import lift, qseries
from src.errors import ConvergenceError, DiscriminantError, ParameterError, PrecisionError
from src.models import QuadratureGrid, SeriesParams, UpperHalfPoint

# ⟨Δ, Δ⟩ = ∫ |Δ|²y¹² dμ по SL2(Z)\H
DELTA_NORM = 1.0353620568043209e-6


def test_grid_area_and_volume():
    """Тест: площадь усечённой области и гиперболический объём π/3 − 1/Y"""
    grid = QuadratureGrid.standard(cutoff=6.0)
    points, weights = grid.points()
    area = 6.0 - (math.sqrt(3) / 4 + math.pi / 6)
    assert abs(np.sum(weights) - area) < 1e-12
    assert abs(np.sum(weights / points.imag ** 2) - (math.pi / 3 - 1 / 6.0)) < 1e-12


def test_grid_cutoff_validated():
    with pytest.raises(ParameterError):
        QuadratureGrid.standard(cutoff=1.0)


def test_fourier_coefficient_of_delta():
    """Тест: трапеции по x восстанавливают τ(2) = −24"""
    delta = qseries.delta()
    F = lambda w: qseries.evaluate_q(delta, w)[0]
    assert abs(lift.fourier_coefficient(F, 2, 1.0) - (-24)) < 1e-9


def test_fourier_aliasing_detected():
    F = lambda w: np.exp(2j * math.pi * w.z) + np.exp(2j * math.pi * 33 * w.z)
    with pytest.raises(PrecisionError):
        lift.fourier_coefficient(F, 1, 0.05, M=32, alias_tol=1e-12)


def test_petersson_norm_of_delta():
    delta = lift.delta_evaluator()
    value, tail = lift.petersson_product(12, delta, delta, QuadratureGrid.standard())
    assert abs(value.real - DELTA_NORM) < 1e-5 * DELTA_NORM
    assert abs(value.imag) < 1e-12
    assert tail < 1e-15


def test_petersson_rejects_growing_integrand():
    ones = lambda points: np.ones(np.shape(points), dtype=complex)
    with pytest.raises(ConvergenceError):
        lift.petersson_product(12, ones, ones, QuadratureGrid.standard())


@pytest.mark.parametrize("m", [1, 2, 3])
def test_petersson_coefficient_formula(m):
    """Тест: ⟨Δ, P_{12,m}⟩·(4πm)^{11}/Γ(11) = τ(m)"""
    tau = int(qseries.delta().coefficient(m))
    ratio = lift.coefficient_formula_ratio(m)
    assert abs(ratio - tau) < 1e-3 * abs(tau)


def test_mellin_integral():
    numeric, closed, residual = lift.mellin_weight_integral(6, 5)
    assert residual < 1e-10
    assert abs(closed - gamma(5.5) / (20 * math.pi) ** 5.5) < 1e-13 * closed


def test_lift_constant():
    assert abs(lift.lift_constant(6) - gamma(5.5) / (6 * (4 * math.pi) ** 5.5)) < 1e-20


def test_lift_components_reject_non_discriminant():
    with pytest.raises(DiscriminantError):
        lift.theta_lift_components(6, 7, UpperHalfPoint(0.1, 1.2))


@pytest.mark.slow
def test_lift_components_pass():
    report = lift.theta_lift_components(6, 5, UpperHalfPoint(0.1, 1.2))
    assert report.passed
    assert set(report.values["residuals"]) == {"extraction", "mellin", "symmetry"}


@pytest.mark.slow
def test_pairing_ratio_for_f_6_5():
    """Тест: f_{6,5} ∝ Δ, поэтому отношение спариваний равно τ(2)/2^{11}"""
    F = lift.vectorize(lift.f_evaluator(SeriesParams(6, 5, 1e-8)))
    ratio = lift.poincare_pairing_ratio(F)
    assert abs(ratio - (-24 / 2 ** 11)) < 1e-3 * 24 / 2 ** 11
