from .lemma22_checker import Lemma22Check
from .theorem1_checker import Theorem1Check
from .theorem2_checker import Theorem2Check
from .theorem3_checker import Theorem3Check
from .vigneras_checker import VignerasCheck
from .akn_checker import AknCheck

# Наборы проверок в порядке запуска; ключ совпадает с --suite
ALL_CHECKS = {
    "lemma22": Lemma22Check,
    "theorem1": Theorem1Check,
    "theorem2": Theorem2Check,
    "theorem3": Theorem3Check,
    "vigneras": VignerasCheck,
    "akn": AknCheck,
}


def get_all_checks(config: dict = None, suites=None):
    checks = []
    for suite_id, CheckClass in ALL_CHECKS.items():
        if suites is not None and suite_id not in suites:
            continue
        check = CheckClass()
        if config:
            check.set_rules(config)
        checks.append(check)

    return checks
