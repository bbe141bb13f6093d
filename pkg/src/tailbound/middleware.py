import abc
import logging
from abc import ABC
from typing import Optional

from line_profiler import profile

logger_name = 'tailbound'


@profile
def generate_msg(context: str, msg: str) -> str:
    return '[{}/{}]: {}'.format(logger_name, context, msg)


class MiddlewareWrapper(ABC):
    """
    Everything that talks to the outside world for diagnostics goes through this facade,
    so that library code never configures logging on its own.
    """

    @abc.abstractmethod
    def loginfo(self, msg: str): ...

    @abc.abstractmethod
    def logwarn(self, msg: str): ...

    @abc.abstractmethod
    def logerr(self, msg: str): ...

    @abc.abstractmethod
    def logdebug(self, msg: str): ...

    @abc.abstractmethod
    def logfatal(self, msg: str): ...


class PythonLoggingWrapper(MiddlewareWrapper):

    def __init__(self, context: str = 'core', level: Optional[int] = None):
        self.context = context
        self.logger = logging.getLogger(logger_name)
        if level is not None:
            self.logger.setLevel(level)

    def loginfo(self, msg: str):
        self.logger.info(generate_msg(self.context, msg))

    def logwarn(self, msg: str):
        self.logger.warning(generate_msg(self.context, msg))

    def logerr(self, msg: str):
        self.logger.error(generate_msg(self.context, msg))

    def logdebug(self, msg: str):
        self.logger.debug(generate_msg(self.context, msg))

    def logfatal(self, msg: str):
        self.logger.critical(generate_msg(self.context, msg))


_middleware: MiddlewareWrapper = PythonLoggingWrapper()


def get_middleware() -> MiddlewareWrapper:
    return _middleware


def set_middleware(middleware: MiddlewareWrapper):
    global _middleware
    _middleware = middleware
