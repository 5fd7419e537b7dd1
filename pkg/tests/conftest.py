import sys
from pathlib import Path

import pytest

# Корень репозитория в путь Python, чтобы работал импорт src.*
sys.path.insert(0, str(Path(__file__).parent.parent))

from src.checks.base_checker import RunContext  # noqa: E402
from src.models import SeriesParams, UpperHalfPoint  # noqa: E402
from src.utils import ConfigLoader  # noqa: E402


@pytest.fixture
def config():
    return ConfigLoader.get_default_config()


@pytest.fixture
def context():
    return RunContext(seed=42)


@pytest.fixture
def params_6_5():
    return SeriesParams(6, 5, 1e-8)


@pytest.fixture
def base_points():
    return [UpperHalfPoint(0.1, 1.2), UpperHalfPoint(-0.3, 0.9), UpperHalfPoint(0.45, 1.7)]
