import re
import sys
from pathlib import Path
from typing import List, Optional

import click
import numpy as np

# Настройка пути для импортов
sys.path.insert(0, str(Path(__file__).parent.parent))

from src.checks import ALL_CHECKS, get_all_checks  # noqa: E402
from src.checks.base_checker import RunContext  # noqa: E402
from src.core import Reporter, Validator  # noqa: E402
from src.core import lift, qforms, series  # noqa: E402
from src.core.theta import ThetaKernel  # noqa: E402
from src.errors import DiscriminantError, ParameterError, VerificationError  # noqa: E402
from src.models import SeriesParams, UpperHalfPoint  # noqa: E402
from src.utils import ConfigLoader, setup_logger  # noqa: E402

DEFAULT_CONFIG = "config/verification_rules.yaml"

EXIT_OK, EXIT_FAILED = 0, 1

FORM_COLUMNS = ("a", "b", "c", "re(Q)", "im(Q)", "Qz")
FOURIER_COLUMNS = ("n", "re", "im", "abs", "ratio")
EVAL_COLUMNS = ("x", "y", "re", "im", "abs", "tail")


def parse_point(text: str) -> UpperHalfPoint:
    """'i', '2i', '0.1+1.2i', '-0.5+0.866i' → UpperHalfPoint"""
    cleaned = text.replace(" ", "").replace("I", "i")
    cleaned = re.sub(r"(^|[+-])i$", r"\g<1>1i", cleaned).replace("i", "j")
    try:
        value = complex(cleaned)
    except ValueError:
        raise click.BadParameter(f"не удаётся разобрать точку '{text}'")
    try:
        return UpperHalfPoint.from_complex(value)
    except ParameterError as e:
        raise click.BadParameter(str(e))


def parse_range(text: str) -> List[int]:
    """'1..5' → [1, 2, 3, 4, 5]; '3' → [3]"""
    match = re.fullmatch(r"\s*(-?\d+)\s*(?:\.\.\s*(-?\d+)\s*)?", text)
    if not match:
        raise click.BadParameter(f"ожидается n или n1..n2, получено '{text}'")
    low = int(match.group(1))
    high = int(match.group(2)) if match.group(2) is not None else low
    if high < low:
        raise click.BadParameter(f"пустой диапазон {text}")
    return list(range(low, high + 1))


def check_weight(k: Optional[int]) -> None:
    if k is not None and (k <= 2 or k % 2):
        raise click.UsageError(f"k должно быть чётным и > 2, получено k={k}")


def check_discriminant(D: Optional[int], allow_square: bool = False) -> None:
    if D is None:
        return
    try:
        qforms.validate_discriminant(D, allow_square)
    except DiscriminantError as e:
        raise click.UsageError(str(e))


def emit(text: str, output: Optional[str]) -> None:
    if output:
        Path(output).write_text(text, encoding="utf-8")
        click.echo(f"Таблица сохранена в: {output}", err=True)
    else:
        click.echo(text, nl=False)


@click.group()
@click.option("--config", "-c", "config_path", default=DEFAULT_CONFIG, show_default=True,
              help="Путь к конфигурационному файлу")
@click.option("--verbose", "-v", is_flag=True, help="Подробный вывод (DEBUG) в stderr")
@click.pass_context
def cli(ctx, config_path, verbose):
    """Численная проверка тождеств для f_{k,D}, ω_{k+1,D} и тэта-ядер"""
    setup_logger(verbose)
    ctx.ensure_object(dict)
    ctx.obj["config"] = ConfigLoader.load_yaml(config_path)
    ctx.obj["verbose"] = verbose


@cli.command()
@click.option("--suite", type=click.Choice(list(ALL_CHECKS) + ["all"]), default="all", show_default=True,
              help="Набор проверок")
@click.option("--k", "k", type=int, default=None, help="Вес k (чётный, > 2)")
@click.option("--D", "D", type=int, default=None, help="Дискриминант D")
@click.option("--seed", type=int, default=42, show_default=True, help="Зерно всех случайных выборок")
@click.option("--json", "json_path", default=None, help="Путь для JSON-отчёта")
@click.option("--jobs", type=int, default=1, show_default=True, help="Число параллельных наборов")
@click.option("--slow", is_flag=True, help="Включить медленные сравнения скалярных произведений")
@click.option("--timestamp", default=None, help="Фиксированная метка времени в отчёте")
@click.pass_context
def verify(ctx, suite, k, D, seed, json_path, jobs, slow, timestamp):
    """
    Запускает наборы проверок; код выхода: 0 всё пройдено, 1 есть непройденные, 2 ошибка параметров.

    Набор vigneras даёт по отчёту на выборку (samples, по умолчанию 100);
    suites.vigneras.structural: true в конфиге добавляет ещё 8 структурных отчётов.
    """
    check_weight(k)
    check_discriminant(D)
    if seed < 0:
        raise click.UsageError("seed должен быть неотрицательным")
    config = ctx.obj["config"]

    validator = Validator(config, jobs)
    for check in get_all_checks(suites=None if suite == "all" else [suite]):
        validator.register_check(check)
    if suite != "all":
        validator.config = ConfigLoader.merge(config, {"check_settings": {"enabled_checks": [suite]}})

    context = RunContext(seed=seed, overrides={"k": k, "D": D, "slow": slow or None})
    results = validator.validate(context, progress=ctx.obj["verbose"])
    reports = Validator.collect(results)

    report = Reporter.generate_report(suite=suite, seed=seed, reports=reports, timestamp=timestamp)
    if json_path:
        Reporter.save_report(report_data=report, report_path=json_path)

    stats = report["summary"]
    click.echo(f"\n{'=' * 50}")
    click.echo("ИТОГИ ПРОВЕРКИ:")
    click.echo(f"  Набор: {suite}, seed={seed}")
    click.echo(f"  Всего проверок: {stats['total_checks']}")
    click.echo(f"  ✓ Пройдено: {stats['passed']}")
    click.echo(f"  ✗ Не пройдено: {stats['failed']}")
    click.echo(f"  Успешность: {stats['success_rate']}")
    for entry in report["reports"]:
        if not entry["passed"]:
            click.echo(f"  ❌ {entry['check_name']}: невязка {entry['residual']}, допуск {entry['tolerance']}")
    if json_path:
        click.echo(f"\nПодробный отчет сохранен в: {json_path}")
    click.echo('=' * 50)
    ctx.exit(EXIT_OK if stats["failed"] == 0 else EXIT_FAILED)


@cli.command("qforms")
@click.option("--D", "D", type=int, required=True, help="Дискриминант D")
@click.option("--z", "z", default="i", show_default=True, help="Точка z, например 0.1+1.2i")
@click.option("--radius", type=float, required=True, help="Граница |Q(z,1)| ≤ R")
@click.option("--allow-square", is_flag=True, help="Разрешить квадратный D")
@click.option("--format", "fmt", type=click.Choice(["csv", "json"]), default="csv", show_default=True)
@click.option("--output", "-o", default=None, help="Файл вывода (по умолчанию stdout)")
def qforms_command(D, z, radius, allow_square, fmt, output):
    """Формы дискриминанта D с |Q(z,1)| ≤ R. Колонки CSV: a,b,c,re(Q),im(Q),Qz"""
    check_discriminant(D, allow_square)
    point = parse_point(z)
    if radius <= 0:
        raise click.UsageError("radius должен быть положительным")
    forms = qforms.enumerate_bounded(D, point, radius, allow_square)
    emit(Reporter.render_table(qforms.form_rows(forms, point), FORM_COLUMNS, fmt), output)


@cli.command()
@click.option("--function", "function", type=click.Choice(["f", "omega"]), default="f", show_default=True)
@click.option("--k", "k", type=int, required=True)
@click.option("--D", "D", type=int, required=True)
@click.option("--n", "n_range", default="1..5", show_default=True, help="Индексы n или n1..n2")
@click.option("--y", "y", type=float, default=1.0, show_default=True, help="Высота, на которой снимается ряд")
@click.option("--M", "M", type=int, default=32, show_default=True, help="Узлы трапеций")
@click.option("--tol", type=float, default=None, help="Точность сумм (по умолчанию numerics.default_tol)")
@click.option("--format", "fmt", type=click.Choice(["csv", "json"]), default="csv", show_default=True)
@click.option("--output", "-o", default=None)
@click.pass_context
def fourier(ctx, function, k, D, n_range, y, M, tol, fmt, output):
    """Коэффициенты Фурье c(n). Колонки CSV: n,re,im,abs,ratio (c(n)/c(n₀))"""
    check_weight(k)
    check_discriminant(D)
    if y <= 0:
        raise click.UsageError("y должно быть положительным")
    indices = parse_range(n_range)
    tol = tol or _default_tol(ctx)
    p = SeriesParams(k, D, tol)
    evaluator = lift.f_evaluator(p) if function == "f" else lift.omega_evaluator(p)
    try:
        coefficients = [lift.fourier_coefficient(evaluator, n, y, M) for n in indices]
    except VerificationError as e:
        raise click.ClickException(str(e))
    first = coefficients[0]
    rows = [{
        "n": n, "re": c.real, "im": c.imag, "abs": abs(c),
        "ratio": (c / first).real if abs(first) > 0 else None,
    } for n, c in zip(indices, coefficients)]
    emit(Reporter.render_table(rows, FOURIER_COLUMNS, fmt), output)


@cli.command("eval")
@click.option("--function", "function", type=click.Choice(["f", "omega", "holomorphic", "lambda"]),
              default="omega", show_default=True)
@click.option("--k", "k", type=int, required=True)
@click.option("--D", "D", type=int, default=None, help="Дискриминант (не нужен для lambda)")
@click.option("--x-range", nargs=3, type=float, default=(-0.5, 0.5, 5), show_default=True,
              help="x_min x_max количество")
@click.option("--y-range", nargs=3, type=float, default=(1.0, 2.0, 3), show_default=True,
              help="y_min y_max количество")
@click.option("--z", "z", default="0.1+1.2i", show_default=True, help="Точка z для lambda (сетка по τ)")
@click.option("--d-max", type=int, default=40, show_default=True)
@click.option("--tol", type=float, default=None, help="Точность сумм (по умолчанию numerics.default_tol)")
@click.option("--format", "fmt", type=click.Choice(["csv", "json"]), default="csv", show_default=True)
@click.option("--output", "-o", default=None)
@click.pass_context
def evaluate(ctx, function, k, D, x_range, y_range, z, d_max, tol, fmt, output):
    """Значения на сетке точек. Колонки CSV: x,y,re,im,abs,tail"""
    check_weight(k)
    if function != "lambda":
        if D is None:
            raise click.UsageError(f"для --function {function} нужен --D")
        check_discriminant(D)
    tol = tol or _default_tol(ctx)
    xs = _grid_axis(x_range, "x-range")
    ys = _grid_axis(y_range, "y-range")
    if ys[0] <= 0:
        raise click.UsageError("y_min должно быть положительным")

    rows = []
    try:
        if function == "lambda":
            kernel = ThetaKernel(k, parse_point(z), d_max, tol, float(ys[0]), "omega")
            for x in xs:
                for y in ys:
                    value = kernel(UpperHalfPoint(float(x), float(y)))
                    rows.append({"x": x, "y": y, "re": value.real, "im": value.imag, "abs": abs(value),
                                 "tail": tol})
        else:
            p = SeriesParams(k, D, tol)
            for x in xs:
                for y in ys:
                    value = series.hyperbolic_values(p, UpperHalfPoint(float(x), float(y)))[function]
                    rows.append({"x": x, "y": y, "re": value.value.real, "im": value.value.imag,
                                 "abs": abs(value.value), "tail": value.tail_bound})
    except VerificationError as e:
        raise click.ClickException(str(e))
    emit(Reporter.render_table(rows, EVAL_COLUMNS, fmt), output)


def _default_tol(ctx) -> float:
    return ctx.obj["config"].get("numerics", {}).get("default_tol", 1e-8)


def _grid_axis(bounds, name: str) -> List[float]:
    low, high, count = bounds
    if count < 1 or count != int(count) or high < low:
        raise click.UsageError(f"--{name}: ожидается min ≤ max и целое количество ≥ 1")
    return [round(float(t), 12) for t in np.linspace(low, high, int(count))]


def main():
    cli(obj={})


if __name__ == "__main__":
    main()
