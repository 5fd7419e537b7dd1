from typing import List

import numpy as np

from src.checks.base_checker import BaseCheck, RunContext
from src.core import theta
from src.models import UpperHalfPoint, VerificationReport

FIXED_SAMPLES = (
    (6, UpperHalfPoint(0.2, 1.3), (1.0, 3.0, 1.0)),
    (8, UpperHalfPoint(0.0, 1.0), (0.5, 2.5, -1.0)),
)


class VignerasCheck(BaseCheck):
    """Дифференциальное уравнение Виньераса для ядра p на решётке Z³ с формой b² − 4ac"""

    def __init__(self):
        super().__init__(
            check_id="vigneras",
            check_name="Уравнение Виньераса"
        )
        self.samples = 100
        self.residual_tol = 1e-10
        self.homogeneity_tol = 1e-12
        self.min_q = 1.0

    def set_rules(self, rules: dict):
        super().set_rules(rules)
        self.samples = self._safe_get_rule('suites.vigneras.samples', self.samples)
        self.residual_tol = self._safe_get_rule('suites.vigneras.residual_tol', self.residual_tol)
        self.homogeneity_tol = self._safe_get_rule('suites.vigneras.homogeneity_tol', self.homogeneity_tol)
        self.min_q = self._safe_get_rule('suites.vigneras.min_q', self.min_q)

    @staticmethod
    def _random_vector(rng: np.random.Generator, min_q: float, bound: float = 3.0) -> tuple:
        """Равномерно в кубе при q(w) > max(min_q, δ)"""
        floor = max(min_q, theta.SMOOTHNESS_DELTA)
        while True:
            w = tuple(round(float(t), 12) for t in rng.uniform(-bound, bound, 3))
            if theta.quadratic_form(w) > floor:
                return w

    def run(self, context: RunContext) -> List[VerificationReport]:
        rng = context.rng(4)
        samples = self._setting(context, "samples", self.samples)
        forced_k = context.overrides.get("k")
        tol = self._setting(context, "residual_tol", self.residual_tol)
        points = self._random_points(rng, samples, 0.5, 2.0)

        reports = []
        for index, z in enumerate(points):
            k = int(forced_k) if forced_k is not None else int(rng.choice([4, 6, 8]))
            w = self._random_vector(rng, self._setting(context, "min_q", self.min_q))
            name = self._name(f"sample{index:03d}")
            params = {"k": k, "z": self._point_params(z), "w": list(w), "seed": context.seed}
            reports.append(self._guarded(
                name, params,
                lambda n=name, k=k, z=z, w=w, params=params: VerificationReport.from_residual(
                    n, theta.vigneras_relative_residual(k, z, w), tol, params,
                    notes=f"(E − Δ/4π)p = {theta.eigenvalue(k)}·p",
                )))

        if self._setting(context, "structural", False):
            reports.extend(self._structural(context))
        return reports

    def _structural(self, context) -> List[VerificationReport]:
        reports = []
        for index, (k, z, w) in enumerate(FIXED_SAMPLES):
            name = self._name(f"fixed{index}")
            reports.append(VerificationReport.from_residual(
                name, theta.vigneras_relative_residual(k, z, w), self.residual_tol,
                params={"k": k, "z": self._point_params(z), "w": list(w)},
            ))

        z = UpperHalfPoint(0.2, 1.3)
        w = (1.0, 3.0, 1.0)
        base = theta.vigneras_p(6, z, w)
        scaled = theta.vigneras_p(6, z, tuple(2.0 * t for t in w))
        reports.append(VerificationReport.from_residual(
            self._name("homogeneity"), abs(scaled - 32 * base) / abs(base), self.homogeneity_tol,
            params={"k": 6, "z": self._point_params(z), "w": list(w), "factor": 4},
            notes="p(√v·w) = v^{(k−1)/2}·p(w)",
        ))

        zero_cases = [
            theta.vigneras_p(6, UpperHalfPoint(0.0, 1.0), (1.0, 1.0, -1.0)),
            theta.vigneras_p(6, z, (0.0, 0.0, 1.0)),
            theta.vigneras_residual(6, z, (1.0, 0.0, 1.0)),
        ]
        reports.append(VerificationReport.from_residual(
            self._name("vanishing_branch"), max(abs(v) for v in zero_cases), 0.0,
            params={"k": 6}, notes="Q_z = 0 на геодезической; p = 0 при b² − 4ac ≤ 0",
        ))

        jet = theta.vigneras_jet(6, z, w)
        reports.append(VerificationReport.from_residual(
            self._name("hessian_symmetry"), float(np.max(np.abs(jet.hess - jet.hess.T))), 0.0,
            params={"k": 6, "z": self._point_params(z), "w": list(w)},
        ))

        product = theta.gram_product()
        identity = all(product[i][j] == (1 if i == j else 0) for i in range(3) for j in range(3))
        forms = all(theta.gram_form(v) == theta.quadratic_form(v)
                    for v in ((1, 3, 1), (2, -1, 5), (-3, 4, 0), (0, 0, 7)))
        reports.append(VerificationReport.from_residual(
            self._name("lattice"), 0.0 if identity and forms else 1.0, 0.0,
            params={"gram": [list(row) for row in theta.GRAM]},
            notes="A·A^{−1} = I и q(w) = (1/2)wᵀAw в рациональной арифметике",
        ))

        isotropy = []
        for point in (z, UpperHalfPoint(-0.4, 0.7), UpperHalfPoint(0.0, 2.0)):
            s = theta.s_vector(point)
            isotropy.append(abs(theta.isotropy_pairing(point) - 2 * point.y ** 2))
            isotropy.append(abs(theta.bilinear(s, s)))
        reports.append(VerificationReport.from_residual(
            self._name("isotropy"), max(isotropy), 1e-12,
            params={}, notes="⟨s, s̄⟩ = 2y², ⟨s, s⟩ = 0",
        ))

        near_cone = [abs(theta.vigneras_p(6, z, (1.0, 2.0 + t, 1.0))) for t in (1e-4, 1e-3)]
        reports.append(VerificationReport.from_residual(
            self._name("light_cone"), max(near_cone), 1e-12,
            params={"k": 6, "z": self._point_params(z)},
            notes="p → 0 у светового конуса b² = 4ac",
        ))
        return reports
