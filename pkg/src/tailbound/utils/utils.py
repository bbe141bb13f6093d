import errno
import importlib
import inspect
import math
import os
from typing import Type, Dict, Union

import numpy as np

significant_digits = 9


def get_all_classes_in_module(module_name: str, parent_class: Type = object) -> Dict[str, Type]:
    classes = {}
    module = importlib.import_module(module_name)
    for class_name, class_ in inspect.getmembers(module, inspect.isclass):
        if issubclass(class_, parent_class) and class_.__module__ == module_name:
            classes[class_name] = class_
    return classes


def create_path(path: str):
    if not os.path.exists(path):
        try:
            os.makedirs(path)
        except OSError as exc:
            if exc.errno != errno.EEXIST:
                raise


def round_significant(x: float, digits: int = significant_digits) -> float:
    if not math.isfinite(x) or x == 0:
        return float(x)
    return float(f'{x:.{digits}g}')


def float_to_json(x: Union[float, np.floating]) -> Union[float, str]:
    x = float(x)
    if math.isnan(x):
        return 'nan'
    if math.isinf(x):
        return 'inf' if x > 0 else '-inf'
    return round_significant(x)


def float_from_json(x: Union[float, int, str, None]) -> float:
    if x is None:
        return math.inf
    return float(x)
