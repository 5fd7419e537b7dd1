import yaml
from typing import Dict, Any

from src.utils.logger import logger


class ConfigLoader:
    """Загрузчик конфигурационных файлов"""

    @staticmethod
    def load_yaml(config_path: str) -> Dict[str, Any]:
        """Загружает конфигурацию из YAML файла"""
        try:
            with open(config_path, 'r', encoding='utf-8') as f:
                data = yaml.safe_load(f)
        except FileNotFoundError:
            logger.warning(f"[Config] Файл {config_path} не найден. Использую настройки по умолчанию.")
            return ConfigLoader.get_default_config()
        except yaml.YAMLError as e:
            logger.error(f"[Config] Ошибка в YAML файле: {e}")
            return ConfigLoader.get_default_config()
        return ConfigLoader.merge(ConfigLoader.get_default_config(), data or {})

    @staticmethod
    def merge(base: Dict[str, Any], override: Dict[str, Any]) -> Dict[str, Any]:
        """Рекурсивно накладывает override на base"""
        result = dict(base)
        for key, value in override.items():
            if isinstance(value, dict) and isinstance(result.get(key), dict):
                result[key] = ConfigLoader.merge(result[key], value)
            else:
                result[key] = value
        return result

    @staticmethod
    def get_default_config() -> Dict[str, Any]:
        """Возвращает конфигурацию по умолчанию (значения критериев приёмки)"""
        return {
            "numerics": {"default_tol": 1e-8},
            "quadrature": {"cutoff": 6.0, "nx": 32, "ny": 64},
            "poincare": {"c_max": 24},
            "theta": {"d_max": 40, "v": 0.2, "nodes": 256},
            "suites": {
                "lemma22": {"samples": 100, "algebraic_tol": 1e-12, "difference_tol": 1e-6},
                "theorem1": {"k": 6, "D": 5, "tol": 1e-8, "modularity_tol": 1e-6,
                             "eigen_tol": 1e-4, "splitting_tol": 1e-9, "divisor_tol": 1e-5, "divisor_min_points": 3,
                             "h_rho_tol": 1e-4, "vanishing_tol": 1e-6, "points": 5,
                             "divisor_pairs": [[6, 5], [6, 8], [8, 5]]},
                "theorem2": {"k": 6, "modularity_tol": 1e-5, "periodicity_tol": 1e-10,
                             "plus_space_tol": 1e-9, "plus_space_dmax": 20, "plus_space_v": 0.5},
                "theorem3": {"k": 6, "D": 5, "extraction_tol": 1e-7, "mellin_tol": 1e-10,
                             "symmetry_tol": 1e-9, "petersson_tol": 1e-3, "slow": False},
                "vigneras": {"samples": 100, "residual_tol": 1e-10, "homogeneity_tol": 1e-12,
                             "min_q": 1.0, "structural": False},
                "akn": {"pairs": 5, "N": 20, "residual_tol": 1e-7},
            },
            "check_settings": {
                "enabled_checks": ["lemma22", "theorem1", "theorem2", "theorem3", "vigneras", "akn"],
            },
        }
