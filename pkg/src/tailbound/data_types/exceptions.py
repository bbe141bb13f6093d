from typing import Dict, Type, Optional


class ExitCode:
    SUCCESS = 0
    BOUND_VIOLATION = 1
    VALIDATION_ERROR = 2


class TailBoundException(Exception):
    """
    Root of all errors raised by tailbound. Every subclass has an error code, which doubles as the
    process exit code of the command line front end.
    """
    error_code: int = ExitCode.VALIDATION_ERROR
    _error_code_map: Dict[int, Type['TailBoundException']] = {}

    def __init__(self, msg: str = ''):
        super().__init__(msg)
        self.msg = msg

    def __init_subclass__(cls, **kwargs):
        super().__init_subclass__(**kwargs)
        cls._error_code_map.setdefault(cls.error_code, cls)

    @classmethod
    def from_error_code(cls, error_code: int, msg: str = '') -> 'TailBoundException':
        return cls._error_code_map.get(error_code, TailBoundException)(msg)


class DontPrintStackTrace:
    pass


# %% validation, exit code 2
class ValidationException(TailBoundException):
    error_code = ExitCode.VALIDATION_ERROR


class InvalidParameterException(ValidationException, DontPrintStackTrace):
    pass


class NotCenteredException(ValidationException, DontPrintStackTrace):
    pass


class UnknownCatalogEntryException(ValidationException, DontPrintStackTrace):
    pass


class EmptyDomainException(ValidationException, DontPrintStackTrace):
    pass


class ConfigException(ValidationException, DontPrintStackTrace):
    def __init__(self, msg: str = '', field: Optional[str] = None):
        if field is not None:
            msg = f'{field}: {msg}'
        super().__init__(msg)
        self.field = field


class NotInClassException(ValidationException, DontPrintStackTrace):
    pass


class InfiniteNormException(ValidationException, DontPrintStackTrace):
    def __init__(self, msg: str = '', member_index: Optional[int] = None):
        super().__init__(msg)
        self.member_index = member_index


class EstimationRefusedException(ValidationException, DontPrintStackTrace):
    pass


class NumericalFailureException(ValidationException):
    pass


# %% verification, exit code 1
class BoundViolationException(TailBoundException, DontPrintStackTrace):
    error_code = ExitCode.BOUND_VIOLATION
