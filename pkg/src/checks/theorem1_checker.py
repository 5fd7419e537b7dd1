import math
from typing import List

from src.checks.base_checker import BaseCheck, RunContext
from src.core import series
from src.core.lift import f_evaluator, fourier_coefficient
from src.core.maass_ops import laplacian
from src.core.qforms import S, T, cocycle, mobius
from src.errors import IllConditionedPointError
from src.models import SeriesParams, UpperHalfPoint, VerificationReport
from src.utils.logger import logger


class Theorem1Check(BaseCheck):
    """Модулярность f и ω, уравнение на собственные значения, расщепление и divisor-форма"""

    def __init__(self):
        super().__init__(
            check_id="theorem1",
            check_name="Свойства ω_{k+1,D}"
        )
        self.k = 6
        self.D = 5
        self.tol = 1e-8

    def set_rules(self, rules: dict):
        super().set_rules(rules)
        self.k = self._safe_get_rule('suites.theorem1.k', self.k)
        self.D = self._safe_get_rule('suites.theorem1.D', self.D)
        self.tol = self._safe_get_rule('suites.theorem1.tol', self.tol)

    def run(self, context: RunContext) -> List[VerificationReport]:
        k = self._setting(context, "k", self.k)
        D = self._setting(context, "D", self.D)
        tol = self._setting(context, "tol", self.tol)
        p = SeriesParams(k, D, tol)
        rng = context.rng(1)
        points = self._random_points(rng, self._setting(context, "points", 5))
        logger.info(f"[theorem1] k={k}, D={D}, tol={tol:.1e}, точек {len(points)}")

        reports = []
        for label, g in (("S", S), ("T", T), ("TS", T * S)):
            for kind, weight in (("f", 2 * k), ("omega", 2 * k + 2)):
                name = self._name(f"modularity.{kind}.{label}")
                reports.append(self._guarded(name, {"k": k, "D": D},
                                             lambda n=name, g=g, kind=kind, w=weight:
                                             self._modularity(n, p, g, kind, w, points, context)))

        eigen_points = self._random_points(context.rng(2), self._setting(context, "eigen_points", 3), 0.9, 1.6)
        for index, z in enumerate(eigen_points):
            name = self._name(f"eigenvalue.point{index}")
            reports.append(self._guarded(name, {"k": k, "D": D, "z": self._point_params(z)},
                                         lambda n=name, z=z: self._eigenvalue(n, k, D, z, context)))

        reports.append(self._guarded(self._name("decay"), {"k": k, "D": D},
                                     lambda: self._decay(self._name("decay"), p, context)))
        reports.append(self._splitting(p, points, context))
        reports.append(self._derivative_identity(p, points, context))

        for pair in self._setting(context, "divisor_pairs", [[6, 5], [6, 8], [8, 5]]):
            pk, pD = int(pair[0]), int(pair[1])
            name = self._name(f"divisor.k{pk}.D{pD}")
            reports.append(self._guarded(name, {"k": pk, "D": pD},
                                         lambda n=name, pk=pk, pD=pD: self._divisor(n, pk, pD, context)))

        reports.append(self._guarded(self._name("vanishing.k4"), {"k": 4, "D": D},
                                     lambda: self._vanishing(D, points, context)))
        reports.append(self._guarded(self._name("height_independence"), {"k": k, "D": D},
                                     lambda: self._height_independence(k, D, context)))
        return reports

    def _modularity(self, name, p, g, kind, weight, points, context) -> VerificationReport:
        pulled_back, forward = [], []
        for z in points:
            j = cocycle(g, z)
            moved = series.hyperbolic_values(p, mobius(g, z))[kind].value
            base = series.hyperbolic_values(p, z)[kind].value
            pulled_back.append(abs(moved / j ** weight - base))
            forward.append(abs(moved - j ** weight * base))
        return VerificationReport.from_residual(
            name, self._max(pulled_back), self._setting(context, "modularity_tol", 1e-6),
            params={"k": p.k, "D": p.D, "tol": p.tol, "weight": weight, "seed": context.seed},
            notes="невязка |j(γ,z)^{−вес}F(γz) − F(z)| без нормировки",
            values={"pulled_back": pulled_back, "forward": forward},
        )

    def _eigenvalue(self, name, k, D, z, context) -> VerificationReport:
        fine = SeriesParams(k, D, self._setting(context, "eigen_series_tol", 1e-12))
        omega = lambda w: series.hyperbolic_values(fine, w)["omega"].value
        value = omega(z)
        residual = abs(laplacian(2 * k + 2, omega, z) - 2 * k * value) / (1.0 + abs(value))
        return VerificationReport.from_residual(
            name, residual, self._setting(context, "eigen_tol", 1e-4),
            params={"k": k, "D": D, "z": self._point_params(z), "tol": fine.tol},
            notes="Δ_{2k+2}ω = 2k·ω",
        )

    def _decay(self, name, p, context) -> VerificationReport:
        heights = self._setting(context, "decay_heights", [10.0, 20.0, 40.0])
        magnitudes, bounds = [], []
        for y in heights:
            scaled = SeriesParams(p.k, p.D, p.tol * (p.D * y * y) ** (-p.k / 2))
            z = UpperHalfPoint(0.0, float(y))
            magnitudes.append(abs(series.omega(scaled, z).value))
            bounds.append(series.omega_majorant(scaled, z))
        decreasing = all(b < a for a, b in zip(magnitudes, magnitudes[1:]))
        bounded = all(m <= b * (1 + 1e-9) + 1e-300 for m, b in zip(magnitudes, bounds))
        return VerificationReport.from_residual(
            name, 0.0 if decreasing and bounded else 1.0, 0.5,
            params={"k": p.k, "D": p.D, "heights": heights},
            notes="|ω(iy)| строго убывает и не превосходит (1/y)·Σ|Q|^{−k}",
            values={"magnitudes": magnitudes, "majorants": bounds},
        )

    def _splitting(self, p, points, context) -> VerificationReport:
        residuals = []
        for z in points:
            values = series.hyperbolic_values(p, z)
            residuals.append(abs(values["omega"].value - values["holomorphic"].value - values["f"].value / z.y))
        return VerificationReport.from_residual(
            self._name("splitting"), self._max(residuals), self._setting(context, "splitting_tol", 1e-9),
            params={"k": p.k, "D": p.D, "tol": p.tol, "seed": context.seed},
            notes="ω = −iΣQ′/Q^{k+1} + f/y",
        )

    def _derivative_identity(self, p, points, context) -> VerificationReport:
        residuals = []
        for z in points:
            values = series.hyperbolic_values(p, z)
            f, fprime, omega = values["f"].value, values["fprime"].value, values["omega"].value
            residuals.append(abs(fprime - 1j * p.k / z.y * f + 1j * p.k * omega))
        return VerificationReport.from_residual(
            self._name("derivative_identity"), self._max(residuals), self._setting(context, "splitting_tol", 1e-9),
            params={"k": p.k, "D": p.D, "tol": p.tol, "seed": context.seed},
            notes="f′ = (ik/y)f − ikω",
        )

    def _divisor(self, name, k, D, context) -> VerificationReport:
        p = SeriesParams(k, D, self._setting(context, "divisor_series_tol", 1e-12))
        points = self._random_points(context.rng(100 * k + D), self._setting(context, "points", 5), 1.1, 1.6)
        differences, magnitudes, rho_residuals = [], [], []
        for z in points:
            try:
                thm = series.divisor_form_thm(p, z)
                bko = series.divisor_form_bko(p, z)
            except IllConditionedPointError as e:
                logger.warning(f"[theorem1] точка {z} пропущена: {e}")
                continue
            differences.append(abs(thm - bko))
            magnitudes.append(max(abs(thm), abs(bko)))
            if k == 8:
                rho_residuals.append(abs(bko - series.h_at_rho(z) / 3))

        min_points = self._setting(context, "divisor_min_points", 3)
        if len(differences) < min_points:
            return VerificationReport.from_residual(
                name, math.inf, 1.0,
                params={"k": k, "D": D, "tol": p.tol, "seed": context.seed},
                notes=f"вычислено {len(differences)} из {len(points)} точек, нужно не меньше {min_points}",
            )

        divisor_tol = self._setting(context, "divisor_tol", 1e-5)
        residual = self._max(differences) / divisor_tol
        notes = "формулы divisor-формы совпадают"
        if k == 6:
            residual = max(residual, self._max(magnitudes) / divisor_tol)
            notes += "; при k=6 обе обращаются в ноль (f ∝ Δ)"
        if rho_residuals:
            residual = max(residual, self._max(rho_residuals) / self._setting(context, "h_rho_tol", 1e-4))
            notes += "; при k=8 совпадают с H_ρ/3"
        return VerificationReport.from_residual(
            name, residual, 1.0,
            params={"k": k, "D": D, "tol": p.tol, "seed": context.seed},
            notes=notes,
            values={"differences": differences, "magnitudes": magnitudes, "rho_residuals": rho_residuals},
        )

    def _vanishing(self, D, points, context) -> VerificationReport:
        p = SeriesParams(4, D, 1e-8)
        magnitudes = []
        for z in points:
            values = series.hyperbolic_values(p, z)
            magnitudes.append(max(abs(values["f"].value), abs(values["omega"].value)))
        return VerificationReport.from_residual(
            self._name("vanishing.k4"), self._max(magnitudes), self._setting(context, "vanishing_tol", 1e-6),
            params={"k": 4, "D": D, "tol": p.tol, "seed": context.seed},
            notes="пространство параболических форм веса 8 нулевое",
        )

    def _height_independence(self, k, D, context) -> VerificationReport:
        p = SeriesParams(k, D, self._setting(context, "divisor_series_tol", 1e-12))
        low, high = self._setting(context, "coefficient_heights", [1.0, 1.3])
        evaluator = f_evaluator(p)
        c_low = fourier_coefficient(evaluator, 1, low)
        c_high = fourier_coefficient(evaluator, 1, high)
        index, leading = series.first_nonvanishing_coefficient(p)
        residual = abs(c_low - c_high) / max(1.0, abs(c_low))
        return VerificationReport.from_residual(
            self._name("height_independence"), residual, self._setting(context, "height_tol", 1e-7),
            params={"k": k, "D": D, "heights": [low, high]},
            notes=f"первый ненулевой коэффициент: n={index}",
            values={"c_low": [c_low.real, c_low.imag], "c_high": [c_high.real, c_high.imag],
                    "leading": [leading.real, leading.imag]},
        )
