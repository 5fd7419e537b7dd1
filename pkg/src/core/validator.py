# src/core/validator.py
from concurrent.futures import ThreadPoolExecutor
from typing import List

from tqdm import tqdm

from src.checks.base_checker import BaseCheck, RunContext
from src.models import SuiteResult, VerificationReport
from src.utils.logger import logger


class Validator:
    """Главный двигатель проверок. Управляет всеми наборами."""

    def __init__(self, config: dict = None, jobs: int = 1):
        self.checks: List[BaseCheck] = []  # Список зарегистрированных наборов
        self.config = config
        self.jobs = max(1, jobs)

    def register_check(self, check: BaseCheck):
        """Добавляет набор в систему и передаёт конфигурацию"""
        if self.config:
            check.set_rules(self.config)

        self.checks.append(check)
        logger.debug(f"[Validator] Зарегистрирован набор: {check.check_id}")

    def enabled(self, check: BaseCheck) -> bool:
        if not self.config:
            return True
        enabled = self.config.get("check_settings", {}).get("enabled_checks")
        return enabled is None or check.check_id in enabled

    def _run_one(self, check: BaseCheck, context: RunContext) -> SuiteResult:
        logger.info(f"[Validator] Запуск набора {check.check_id}")
        reports = check.run(context)
        result = SuiteResult(suite=check.check_id, reports=reports)
        status_icon = "✅" if result.all_passed else "❌"
        logger.info(f"[Validator] {status_icon} {check.check_name}: "
                    f"{sum(r.passed for r in reports)}/{len(reports)}")
        return result

    def validate(self, context: RunContext, progress: bool = False) -> List[SuiteResult]:
        """Запускает все включённые наборы; результат упорядочен как список регистрации"""
        checks = [check for check in self.checks if self.enabled(check)]
        logger.info(f"[Validator] Наборов к запуску: {len(checks)}, потоков: {self.jobs}")

        if self.jobs == 1:
            iterator = tqdm(checks, desc="Наборы", disable=not progress)
            return [self._run_one(check, context) for check in iterator]

        with ThreadPoolExecutor(max_workers=self.jobs) as pool:
            futures = [pool.submit(self._run_one, check, context) for check in checks]
            return [future.result() for future in tqdm(futures, desc="Наборы", disable=not progress)]

    @staticmethod
    def collect(results: List[SuiteResult]) -> List[VerificationReport]:
        """Плоский список отчётов, упорядоченный по имени проверки"""
        reports = [report for result in results for report in result.reports]
        return sorted(reports, key=lambda report: report.check_name)
