from typing import List

from src.checks.base_checker import BaseCheck, RunContext
from src.core import qseries, series
from src.errors import PoleError
from src.models import UpperHalfPoint, VerificationReport
from src.utils.logger import logger

J2_POLYNOMIAL = (159768, -1488, 1)


class AknCheck(BaseCheck):
    """Производящая функция Σ j_n(z)e^{2πinτ} против замкнутой формулы через j′(τ)/(j(z) − j(τ))"""

    def __init__(self):
        super().__init__(
            check_id="akn",
            check_name="Тождество Асаи–Канэко–Ниномии"
        )
        self.pairs = 5
        self.N = 20
        self.residual_tol = 1e-7

    def set_rules(self, rules: dict):
        super().set_rules(rules)
        self.pairs = self._safe_get_rule('suites.akn.pairs', self.pairs)
        self.N = self._safe_get_rule('suites.akn.N', self.N)
        self.residual_tol = self._safe_get_rule('suites.akn.residual_tol', self.residual_tol)

    def _pairs(self, context: RunContext) -> List[tuple]:
        rng = context.rng(11)
        count = self._setting(context, "pairs", self.pairs)
        zs = self._random_points(rng, count - 1, 1.0, 1.3)
        gaps = rng.uniform(0.8, 1.2, count - 1)
        pairs = [(UpperHalfPoint(0.1, 1.0), UpperHalfPoint(0.2, 2.0))]
        for z, gap in zip(zs, gaps):
            x = round(float(rng.uniform(-0.5, 0.5)), 12)
            pairs.append((z, UpperHalfPoint(x, round(z.y + float(gap), 12))))
        return pairs

    def run(self, context: RunContext) -> List[VerificationReport]:
        N = self._setting(context, "N", self.N)
        tol = self._setting(context, "residual_tol", self.residual_tol)
        logger.info(f"[akn] N={N}, пар {self._setting(context, 'pairs', self.pairs)}")

        reports = []
        for index, (z, tau) in enumerate(self._pairs(context)):
            name = self._name(f"pair{index}")
            params = {"z": self._point_params(z), "tau": self._point_params(tau), "N": N, "seed": context.seed}
            reports.append(self._guarded(
                name, params,
                lambda n=name, z=z, tau=tau, params=params: self._pair(n, z, tau, N, tol, params)))

        reports.append(self._faber())
        reports.append(self._pole())
        return reports

    @staticmethod
    def _pair(name, z, tau, N, tol, params) -> VerificationReport:
        generating = series.h_generating(z, tau, N)
        closed = series.akn_closed_form(z, tau)
        return VerificationReport.from_residual(
            name, abs(generating - closed), tol, params,
            notes="Im τ > Im z",
            values={"generating": [generating.real, generating.imag], "closed": [closed.real, closed.imag]},
        )

    def _faber(self) -> VerificationReport:
        """j_2 = j² − 1488j + 159768 как многочлен и как q-ряд, точно"""
        polynomial = qseries.faber_polynomials(2)[2]
        j = qseries.klein_j()
        expected = j * j - j.scale(1488) + qseries.LaurentQSeries.constant(159768, j.precision)
        exact = polynomial == J2_POLYNOMIAL and qseries.faber(2) == expected
        return VerificationReport.from_residual(
            self._name("faber2"), 0.0 if exact else 1.0, 0.0,
            params={"n": 2},
            notes="коэффициенты сравниваются в целых числах",
            values={"polynomial": list(polynomial)},
        )

    def _pole(self) -> VerificationReport:
        """j(i/2) = j(2i): замкнутая формула обязана сообщить о полюсе"""
        z, tau = UpperHalfPoint(0.0, 0.5), UpperHalfPoint(0.0, 2.0)
        try:
            series.akn_closed_form(z, tau)
            raised = False
        except PoleError:
            raised = True
        return VerificationReport.from_residual(
            self._name("pole"), 0.0 if raised else 1.0, 0.0,
            params={"z": self._point_params(z), "tau": self._point_params(tau)},
            notes="ожидается PoleError",
        )
