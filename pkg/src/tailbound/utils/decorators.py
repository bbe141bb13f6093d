from functools import wraps
from time import perf_counter
from typing import TypeVar, Callable

from tailbound.utils.time_collector import time_collector

T = TypeVar("T", bound=Callable)


def record_time(function: T) -> T:
    @wraps(function)
    def wrapper(*args, **kwargs):
        start = perf_counter()
        try:
            return function(*args, **kwargs)
        finally:
            time_collector.add_time(function.__qualname__, perf_counter() - start)

    return wrapper
