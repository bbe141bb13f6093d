import unittest

from tailbound.converters.json_converter import exception_to_json, exception_from_json
from tailbound.data_types.exceptions import ExitCode, TailBoundException, ConfigException, InfiniteNormException, \
    BoundViolationException, ValidationException

error_codes = {value: name for name, value in vars(ExitCode).items() if isinstance(value, int)}


class TestExceptions(unittest.TestCase):
    def test_if_exception_for_all_error_code_exists(self):
        for value, code_name in error_codes.items():
            if value != ExitCode.SUCCESS:
                assert value in TailBoundException._error_code_map, f'No exception defined for {code_name}'

    def test_error_codes(self):
        assert ConfigException('x').error_code == ExitCode.VALIDATION_ERROR
        assert InfiniteNormException('x', member_index=3).error_code == ExitCode.VALIDATION_ERROR
        assert BoundViolationException('x').error_code == ExitCode.BOUND_VIOLATION

    def test_config_exception_names_field(self):
        e = ConfigException('must be positive', field='u_const')
        assert e.field == 'u_const'
        assert e.msg == 'u_const: must be positive'

    def test_json_round_trip(self):
        e = exception_from_json(exception_to_json(ConfigException('bad grid')))
        assert isinstance(e, ConfigException)
        assert e.msg == 'bad grid'

    def test_unknown_exception_falls_back_to_error_code(self):
        e = exception_from_json({'exception': 'SomethingElse', 'error_code': 1, 'msg': 'violated'})
        assert isinstance(e, BoundViolationException)
        e = exception_from_json({'exception': 'SomethingElse', 'error_code': 2})
        assert isinstance(e, ValidationException)
