import logging
import os
import sys

import pytest

sys.path.insert(0, os.path.join(os.path.dirname(os.path.dirname(os.path.abspath(__file__))), 'src'))

from tailbound.configs.numerics_config import numerics
from tailbound.middleware import get_middleware, set_middleware, PythonLoggingWrapper


@pytest.fixture(autouse=True)
def numerics_defaults():
    numerics.set_defaults()
    yield
    numerics.set_defaults()


@pytest.fixture(scope='session', autouse=True)
def middleware():
    logging.getLogger('tailbound').setLevel(logging.DEBUG)
    set_middleware(PythonLoggingWrapper(context='tests'))
    get_middleware().loginfo('tests started')


@pytest.fixture()
def out_dir(tmp_path):
    path = tmp_path / 'out'
    return str(path)
