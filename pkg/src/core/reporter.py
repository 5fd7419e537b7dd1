import csv
import io
import json
import math
from datetime import datetime
from fractions import Fraction
from typing import Any, Dict, List, Optional, Sequence

import jsonschema
import numpy as np

from src.models import VerificationReport
from src.utils.logger import logger

SCHEMA_VERSION = 1

REPORT_SCHEMA = {
    "type": "object",
    "required": ["schema", "timestamp", "seed", "suite", "summary", "reports"],
    "properties": {
        "schema": {"const": SCHEMA_VERSION},
        "timestamp": {"type": "string"},
        "seed": {"type": "integer"},
        "suite": {"type": "string"},
        "summary": {
            "type": "object",
            "required": ["total_checks", "passed", "failed", "success_rate"],
        },
        "reports": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["check_name", "params", "residual", "tolerance", "passed", "status", "notes"],
                "properties": {
                    "check_name": {"type": "string"},
                    "params": {"type": "object"},
                    "residual": {"type": ["number", "null"]},
                    "tolerance": {"type": "number"},
                    "passed": {"type": "boolean"},
                    "status": {"enum": ["PASSED", "FAILED", "ERROR"]},
                    "notes": {"type": "string"},
                },
            },
        },
    },
}


def _jsonable(value: Any) -> Any:
    """numpy-скаляры, комплексные числа и дроби в типы JSON; inf и nan в null"""
    if isinstance(value, dict):
        return {str(k): _jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple, np.ndarray)):
        return [_jsonable(v) for v in value]
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, Fraction):
        return str(value)
    if isinstance(value, (complex, np.complexfloating)):
        return [_jsonable(value.real), _jsonable(value.imag)]
    if isinstance(value, (float, np.floating)):
        value = float(value)
        return value if math.isfinite(value) else None
    return value


class Reporter:
    """Формирует финальный отчёт в формате JSON и таблицы CSV"""

    @staticmethod
    def report_entry(report: VerificationReport) -> Dict[str, Any]:
        return {
            "check_name": report.check_name,
            "params": _jsonable(report.params),
            "residual": _jsonable(report.residual),
            "tolerance": _jsonable(report.tolerance),
            "passed": report.passed,
            "status": report.status.value,
            "notes": report.notes,
            "values": _jsonable(report.values),
        }

    @staticmethod
    def generate_report(*, suite: str, seed: int, reports: List[VerificationReport],
                        timestamp: Optional[str] = None) -> dict:
        """Создаёт структуру данных для отчёта"""
        total = len(reports)
        passed = sum(1 for r in reports if r.passed)

        report = {
            "schema": SCHEMA_VERSION,
            "timestamp": timestamp or datetime.now().isoformat(),
            "seed": seed,
            "suite": suite,
            "summary": {
                "total_checks": total,
                "passed": passed,
                "failed": total - passed,
                "success_rate": f"{(passed / total) * 100:.1f}%" if total > 0 else "0%"
            },
            "reports": [Reporter.report_entry(r) for r in reports],
        }
        jsonschema.validate(report, REPORT_SCHEMA)
        return report

    @staticmethod
    def save_report(*, report_data: Dict[str, Any], report_path: str):
        """Проверяет отчёт по схеме и сохраняет в JSON файл"""
        jsonschema.validate(report_data, REPORT_SCHEMA)
        with open(report_path, 'w', encoding='utf-8') as f:
            json.dump(report_data, f, ensure_ascii=False, indent=2)
        logger.info(f"[Reporter] Отчёт сохранён: {report_path}")

    @staticmethod
    def render_table(rows: List[Dict[str, Any]], columns: Sequence[str], fmt: str = "csv") -> str:
        """Таблица строк в CSV (с заголовком) или JSON-массив объектов"""
        rows = [{column: _jsonable(row.get(column)) for column in columns} for row in rows]
        if fmt == "json":
            return json.dumps(rows, ensure_ascii=False, indent=2)
        buffer = io.StringIO()
        writer = csv.DictWriter(buffer, fieldnames=list(columns), lineterminator="\n")
        writer.writeheader()
        for row in rows:
            writer.writerow(row)
        return buffer.getvalue()
