class VerificationError(Exception):
    """Базовая ошибка верификатора"""


class ParameterError(VerificationError):
    """Нарушено предусловие операции"""


class InputRangeError(VerificationError):
    """Коэффициенты вне допустимого 64-битного диапазона"""


class DiscriminantError(VerificationError):
    """Число не является положительным дискриминантом"""


class SquareDiscriminantError(DiscriminantError):
    """Квадратный дискриминант без явного разрешения"""


class GroupElementError(VerificationError):
    """Матрица не лежит в нужной группе"""


class PrecisionError(VerificationError):
    """Хвост усечённого ряда выше допуска"""


class ConvergenceError(VerificationError):
    """Адаптивная сумма не сошлась в пределах бюджета"""


class PoleError(VerificationError):
    """Точка является полюсом"""


class IllConditionedPointError(VerificationError):
    """Деление на почти нулевое значение"""


class RoughFunctionError(VerificationError):
    """Разностные производные не согласуются между шагами"""


class IntegralityError(VerificationError):
    """После деления коэффициенты q-ряда перестали быть целыми"""
