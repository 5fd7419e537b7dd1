from typing import List

from src.checks.base_checker import BaseCheck, RunContext
from src.core import lift, qseries
from src.models import QuadratureGrid, SeriesParams, UpperHalfPoint, VerificationReport
from src.utils.logger import logger


class Theorem3Check(BaseCheck):
    """
    Тэта-лифт по компонентам и механизм скалярных произведений Петерссона.
    Медленное сравнение ⟨f_{6,5}, P_{12,m}⟩ включается ключом slow.
    """

    def __init__(self):
        super().__init__(
            check_id="theorem3",
            check_name="Тэта-лифт и скалярные произведения"
        )
        self.k = 6
        self.D = 5
        self.grid_settings = {"cutoff": 6.0, "nx": 32, "ny": 64}
        self.c_max = 24
        self.theta_settings = {"d_max": 40, "v": 0.2, "nodes": 256}

    def set_rules(self, rules: dict):
        super().set_rules(rules)
        self.k = self._safe_get_rule('suites.theorem3.k', self.k)
        self.D = self._safe_get_rule('suites.theorem3.D', self.D)
        self.grid_settings = self._safe_get_rule('quadrature', self.grid_settings)
        self.c_max = self._safe_get_rule('poincare.c_max', self.c_max)
        self.theta_settings = self._safe_get_rule('theta', self.theta_settings)

    def _grid(self, cutoff: float = None) -> QuadratureGrid:
        settings = dict(self.grid_settings)
        if cutoff is not None:
            settings["cutoff"] = cutoff
        return QuadratureGrid.standard(settings["cutoff"], settings["nx"], settings["ny"])

    def run(self, context: RunContext) -> List[VerificationReport]:
        k = self._setting(context, "k", self.k)
        D = self._setting(context, "D", self.D)
        z = UpperHalfPoint(*self._setting(context, "z", [0.1, 1.2]))
        logger.info(f"[theorem3] k={k}, D={D}, z={z}")

        lift_params = {
            **self.theta_settings,
            "extraction_tol": self._setting(context, "extraction_tol", 1e-7),
            "mellin_tol": self._setting(context, "mellin_tol", 1e-10),
            "symmetry_tol": self._setting(context, "symmetry_tol", 1e-9),
        }
        reports = []
        for label, kk in (("lift_components", k), ("lift_components.k4", 4)):
            name = self._name(label)
            reports.append(self._guarded(
                name, {"k": kk, "D": D},
                lambda n=name, kk=kk: self._renamed(lift.theta_lift_components(kk, D, z, lift_params), n),
            ))

        for mellin_D in self._setting(context, "mellin_discriminants", [5, 1]):
            name = self._name(f"mellin.D{mellin_D}")
            reports.append(self._guarded(name, {"k": k, "D": mellin_D},
                                         lambda n=name, d=mellin_D: self._mellin(n, k, d, context)))

        for m in self._setting(context, "petersson_indices", [1, 2, 3]):
            name = self._name(f"petersson.delta.m{m}")
            reports.append(self._guarded(name, {"m": m, "c_max": self.c_max},
                                         lambda n=name, m=m: self._coefficient_formula(n, m, context)))

        reports.append(self._guarded(self._name("petersson.cutoff"), {"kappa": 12},
                                     lambda: self._cutoff_stability(context)))
        if self._setting(context, "slow", False):
            reports.append(self._guarded(self._name("petersson.f_6_5"), {"k": 6, "D": 5},
                                         lambda: self._pairing_ratio(context)))
        return reports

    @staticmethod
    def _renamed(report: VerificationReport, name: str) -> VerificationReport:
        report.check_name = name
        return report

    def _mellin(self, name, k, D, context) -> VerificationReport:
        numeric, closed, residual = lift.mellin_weight_integral(k, D)
        return VerificationReport.from_residual(
            name, residual, self._setting(context, "mellin_tol", 1e-10),
            params={"k": k, "D": D},
            notes="∫ v^{k+1/2}e^{−4πDv} dv/v² = Γ(k − 1/2)/(4πD)^{k−1/2}",
            values={"numeric": numeric, "closed": closed, "lift_constant": lift.lift_constant(k)},
        )

    def _coefficient_formula(self, name, m, context) -> VerificationReport:
        ratio = lift.coefficient_formula_ratio(m, self._grid(), self.c_max)
        tau = int(qseries.delta().coefficient(m))
        residual = abs(ratio - tau) / abs(tau)
        return VerificationReport.from_residual(
            name, residual, self._setting(context, "petersson_tol", 1e-3),
            params={"m": m, "c_max": self.c_max, **self.grid_settings},
            notes="⟨Δ, P_{12,m}⟩·(4πm)^{11}/Γ(11) = τ(m)",
            values={"ratio": [ratio.real, ratio.imag], "tau": tau},
        )

    def _cutoff_stability(self, context) -> VerificationReport:
        """⟨Δ, Δ⟩ не зависит от высоты усечения сверх оценки хвоста"""
        delta = lift.delta_evaluator()
        low_cutoff, high_cutoff = self._setting(context, "cutoffs", [5.0, 7.0])
        low, low_tail = lift.petersson_product(12, delta, delta, self._grid(low_cutoff))
        high, high_tail = lift.petersson_product(12, delta, delta, self._grid(high_cutoff))
        residual = abs((low + low_tail) - (high + high_tail)) / abs(high)
        return VerificationReport.from_residual(
            self._name("petersson.cutoff"), residual, self._setting(context, "petersson_tol", 1e-3),
            params={"kappa": 12, "cutoffs": [low_cutoff, high_cutoff]},
            notes="⟨Δ, Δ⟩ при двух высотах усечения с поправкой на хвост",
            values={"low": low.real, "high": high.real, "tails": [low_tail, high_tail]},
        )

    def _pairing_ratio(self, context) -> VerificationReport:
        """⟨f_{6,5}, P_{12,2}⟩/⟨f_{6,5}, P_{12,1}⟩ = (c(2)/c(1))·2^{−11}, f_{6,5} ∝ Δ"""
        p = SeriesParams(6, 5, self._setting(context, "slow_series_tol", 1e-8))
        ratio = lift.poincare_pairing_ratio(lift.vectorize(lift.f_evaluator(p)), 12, self._grid(), self.c_max)
        expected = -24 / 2 ** 11
        return VerificationReport.from_residual(
            self._name("petersson.f_6_5"), abs(ratio - expected) / abs(expected),
            self._setting(context, "petersson_tol", 1e-3),
            params={"k": 6, "D": 5, "tol": p.tol, "c_max": self.c_max},
            notes="аналог формулы коэффициентов в целом весе",
            values={"ratio": [ratio.real, ratio.imag], "expected": expected},
        )
