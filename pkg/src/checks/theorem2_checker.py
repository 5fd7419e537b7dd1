import math
from typing import List

from src.checks.base_checker import BaseCheck, RunContext
from src.core import theta
from src.core.maass_ops import slash, theta_function
from src.core.qforms import IDENTITY, T
from src.models import GroupElement, UpperHalfPoint, VerificationReport
from src.utils.logger import logger

GAMMA0_4_GENERATOR = GroupElement(1, 0, 4, 1)
SQUARE_NOTE = "квадратные дискриминанты включены в сумму ядра"


class Theorem2Check(BaseCheck):
    """Λ_k как форма веса k + 1/2 на Γ_0(4) в плюс-пространстве"""

    def __init__(self):
        super().__init__(
            check_id="theorem2",
            check_name="Модулярность Λ_k"
        )
        self.k = 6
        self.d_max = 40
        self.v = 0.2

    def set_rules(self, rules: dict):
        super().set_rules(rules)
        self.k = self._safe_get_rule('suites.theorem2.k', self.k)
        self.d_max = self._safe_get_rule('theta.d_max', self.d_max)
        self.v = self._safe_get_rule('theta.v', self.v)

    def run(self, context: RunContext) -> List[VerificationReport]:
        k = self._setting(context, "k", self.k)
        z = UpperHalfPoint(*self._setting(context, "z", [0.1, 1.2]))
        kernel_tol = self._setting(context, "kernel_tol", 1e-8)
        params = {"k": k, "z": self._point_params(z), "d_max": self.d_max, "v": self.v}
        logger.info(f"[theorem2] k={k}, z={z}, Dmax={self.d_max}, v={self.v}")

        reports = []
        for index, tau in enumerate(self._circle_points(self.v)):
            name = self._name(f"gamma0_4.point{index}")
            reports.append(self._guarded(
                name, {**params, "tau": self._point_params(tau)},
                lambda n=name, tau=tau: VerificationReport.from_residual(
                    n, theta.half_integral_modularity_residual(k, GAMMA0_4_GENERATOR, tau, z, self.d_max, kernel_tol),
                    self._setting(context, "modularity_tol", 1e-5),
                    params={**params, "tau": self._point_params(tau), "g": GAMMA0_4_GENERATOR.as_rows()},
                    notes=SQUARE_NOTE,
                )))

        tau = UpperHalfPoint(0.3, self.v)
        for label, g, key, default in (("periodicity", T, "periodicity_tol", 1e-10),
                                       ("minus_identity", -IDENTITY, "minus_identity_tol", 1e-12)):
            name = self._name(label)
            reports.append(self._guarded(
                name, params,
                lambda n=name, g=g, key=key, default=default: VerificationReport.from_residual(
                    n, theta.half_integral_modularity_residual(k, g, tau, z, self.d_max, kernel_tol),
                    self._setting(context, key, default), params={**params, "g": g.as_rows()},
                )))

        reports.append(self._guarded(self._name("plus_space"), params, lambda: self._plus_space(k, z, context)))
        reports.append(self._guarded(self._name("theta_multiplier"), {}, lambda: self._theta_multiplier(context)))
        reports.append(self._guarded(self._name("kernels.k4"), params, lambda: self._kernels_vanish(z, context)))
        return reports

    @staticmethod
    def _circle_points(v: float) -> List[UpperHalfPoint]:
        """Точки τ = −1/4 + (1/4)e^{iθ} на изометрической окружности [[1,0],[4,1]] с Im τ = v и 1/4"""
        angle = math.asin(min(1.0, 4 * v))
        points = []
        for theta_angle in (angle, math.pi / 2, math.pi - angle):
            tau = complex(-0.25, 0.0) + 0.25 * complex(math.cos(theta_angle), math.sin(theta_angle))
            points.append(UpperHalfPoint.from_complex(tau))
        return points

    def _plus_space(self, k, z, context) -> VerificationReport:
        d_max = self._setting(context, "plus_space_dmax", 20)
        v = self._setting(context, "plus_space_v", 0.5)
        tol = self._setting(context, "plus_space_tol", 1e-9)
        coefficients = theta.plus_space_coefficients(k, z, v, d_max)
        violations = [n for n, value in coefficients.items() if abs(value) > tol]
        present = theta.ThetaKernel(k, z, d_max, 1e-8, v, "omega").fourier_coefficient(5, v)
        residual = max(abs(value) for value in coefficients.values())
        if abs(present) == 0.0:
            residual = math.inf
        return VerificationReport.from_residual(
            self._name("plus_space"), residual, tol,
            params={"k": k, "z": self._point_params(z), "d_max": d_max, "v": v},
            notes=f"нарушения плюс-пространства: {violations}",
            values={"coefficient_5": [present.real, present.imag]},
        )

    def _theta_multiplier(self, context) -> VerificationReport:
        """θ|_{1/2}γ = θ и согласованность множителя на произведении"""
        residuals = []
        other = GroupElement(1, 1, 4, 5)
        for tau in self._random_points(context.rng(7), 4, 0.3, 1.0):
            residuals.append(abs(slash(0.5, GAMMA0_4_GENERATOR, theta_function, tau) - theta_function(tau)))
            composed = slash(0.5, other * GAMMA0_4_GENERATOR, theta_function, tau)
            nested = slash(0.5, GAMMA0_4_GENERATOR, lambda w: slash(0.5, other, theta_function, w), tau)
            residuals.append(abs(composed - nested))
        return VerificationReport.from_residual(
            self._name("theta_multiplier"), self._max(residuals), self._setting(context, "multiplier_tol", 1e-9),
            params={"seed": context.seed},
            notes="ε_d для отрицательных d берётся по вычету d mod 4",
        )

    def _kernels_vanish(self, z, context) -> VerificationReport:
        tau = UpperHalfPoint(0.1, self.v)
        omega_value = theta.omega_kernel(4, tau, z, self.d_max)
        lambda_value = theta.lambda_kernel(4, tau, z, self.d_max)
        return VerificationReport.from_residual(
            self._name("kernels.k4"), max(abs(omega_value), abs(lambda_value)),
            self._setting(context, "vanishing_tol", 1e-5),
            params={"k": 4, "z": self._point_params(z), "tau": self._point_params(tau)},
            notes=SQUARE_NOTE,
        )
