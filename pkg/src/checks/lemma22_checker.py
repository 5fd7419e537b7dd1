from typing import List

import numpy as np

from src.checks.base_checker import BaseCheck, RunContext
from src.core import qforms
from src.core.maass_ops import wirtinger_dzbar
from src.models import GroupElement, QForm, VerificationReport


class Lemma22Check(BaseCheck):
    """Тождества для форм: инвариант Q_z, действие SL2(Z), производные по z̄"""

    def __init__(self):
        super().__init__(
            check_id="lemma22",
            check_name="Тождества для квадратичных форм"
        )
        self.samples = 100
        self.algebraic_tol = 1e-12
        self.difference_tol = 1e-6

    def set_rules(self, rules: dict):
        super().set_rules(rules)
        self.samples = self._safe_get_rule('suites.lemma22.samples', self.samples)
        self.algebraic_tol = self._safe_get_rule('suites.lemma22.algebraic_tol', self.algebraic_tol)
        self.difference_tol = self._safe_get_rule('suites.lemma22.difference_tol', self.difference_tol)

    @staticmethod
    def _random_form(rng: np.random.Generator, bound: int = 12) -> QForm:
        while True:
            a, b, c = (int(v) for v in rng.integers(-bound, bound + 1, 3))
            if b * b - 4 * a * c > 0:
                return QForm(a, b, c)

    @staticmethod
    def _random_element(rng: np.random.Generator, bound: int = 6) -> GroupElement:
        while True:
            c, d = (int(v) for v in rng.integers(-bound, bound + 1, 2))
            if np.gcd(c, d) != 1:
                continue
            if c == 0:
                return GroupElement(d, int(rng.integers(-bound, bound + 1)), 0, d)
            a = pow(d, -1, abs(c)) if abs(c) > 1 else 0
            return GroupElement(a, (a * d - 1) // c, c, d)

    def run(self, context: RunContext) -> List[VerificationReport]:
        rng = context.rng(22)
        samples = self._setting(context, "samples", self.samples)
        cases = [(self._random_form(rng), point)
                 for point in self._random_points(rng, samples, 0.5, 2.5)]
        elements = [self._random_element(rng) for _ in range(samples)]
        params = {"samples": samples, "seed": context.seed}

        norm, derivative_lemma, conj_lemma, split = [], [], [], []
        for Q, z in cases:
            value = qforms.evaluate(Q, z)
            q_z = qforms.geodesic_invariant(Q, z)
            D = qforms.discriminant(Q)
            y = z.y
            norm.append(abs(D * y * y + q_z * q_z * y * y - abs(value) ** 2) / abs(value) ** 2)
            rebuilt = q_z * y + 1j * y * qforms.z_derivative(Q, z)
            split.append(abs(rebuilt - value) / max(1.0, abs(value)))

            dzbar = wirtinger_dzbar(lambda w: qforms.geodesic_invariant(Q, w), z)
            derivative_lemma.append(abs(2j * y * y * dzbar - value) / max(1.0, abs(value)))

            conj_value = lambda w: w.y ** 2 / qforms.evaluate(Q, w).conjugate()
            expected = 1j * y * y * q_z / value.conjugate() ** 2
            conj_lemma.append(abs(wirtinger_dzbar(conj_value, z) - expected) / max(1.0, abs(expected)))

        invariance, cocycle, geodesic, right_action = [], [], [], []
        for index, ((Q, z), g) in enumerate(zip(cases, elements)):
            moved = qforms.act(Q, g)
            invariance.append(float(qforms.discriminant(moved) != qforms.discriminant(Q)))
            gz = qforms.mobius(g, z)
            j = qforms.cocycle(g, z)
            lhs = qforms.evaluate(Q, gz)
            rhs = qforms.evaluate(moved, z) / j ** 2
            cocycle.append(abs(lhs - rhs) / max(1.0, abs(lhs)))
            geodesic.append(abs(qforms.geodesic_invariant(Q, gz) - qforms.geodesic_invariant(moved, z))
                            / max(1.0, abs(qforms.geodesic_invariant(moved, z))))
            h = elements[(index + 1) % len(elements)]
            right_action.append(float(qforms.act(moved, h) != qforms.act(Q, g * h)))

        algebraic = self.algebraic_tol
        return [
            VerificationReport.from_residual(self._name("norm_identity"), self._max(norm), algebraic, params,
                                             notes="|Q(z,1)|² = y²(D + Q_z²)"),
            VerificationReport.from_residual(self._name("dzbar_geodesic"), self._max(derivative_lemma),
                                             self.difference_tol, params, notes="2iy²·∂Q_z/∂z̄ = Q(z,1)"),
            VerificationReport.from_residual(self._name("dzbar_conjugate"), self._max(conj_lemma),
                                             self.difference_tol, params,
                                             notes="∂/∂z̄ (y²/Q(z̄,1)) = iy²Q_z/Q(z̄,1)²"),
            VerificationReport.from_residual(self._name("splitting"), self._max(split), algebraic, params,
                                             notes="Q_z·y + iy·Q′(z,1) = Q(z,1)"),
            VerificationReport.from_residual(self._name("discriminant_invariance"), self._max(invariance), 0.0,
                                             params),
            VerificationReport.from_residual(self._name("cocycle"), self._max(cocycle), 1e-9, params,
                                             notes="Q(γz,1) = j(γ,z)^{−2}(Q∘γ)(z,1)"),
            VerificationReport.from_residual(self._name("geodesic_equivariance"), self._max(geodesic), 1e-8,
                                             params, notes="Q_{γz} = (Q∘γ)_z"),
            VerificationReport.from_residual(self._name("right_action"), self._max(right_action), 0.0, params),
        ]
