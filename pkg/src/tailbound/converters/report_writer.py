import json
import os
from typing import Dict, Any, Optional, List

import numpy as np
import pandas as pd

from tailbound.converters import json_converter
from tailbound.data_types.data_types import BoundCurve
from tailbound.data_types.exceptions import TailBoundException
from tailbound.harness.empirical import TailReport, Verdict, EmpiricalTail
from tailbound.middleware import get_middleware
from tailbound.utils.utils import create_path, significant_digits

float_format = f'%.{significant_digits}g'


class ReportWriter:
    """
    Writes CSV tables and JSON documents into one output directory. Numbers carry 9 significant digits.
    """

    def __init__(self, out_dir: str, prefix: str = ''):
        self.out_dir = out_dir
        self.prefix = prefix
        create_path(out_dir)

    def path(self, name: str) -> str:
        file_name = f'{self.prefix}_{name}' if self.prefix else name
        return os.path.join(self.out_dir, file_name)

    def write_csv(self, name: str, df: pd.DataFrame) -> str:
        path = self.path(f'{name}.csv')
        df.to_csv(path, index=False, float_format=float_format)
        get_middleware().loginfo(f'wrote {path}')
        return path

    def write_json(self, name: str, data: Dict[str, Any]) -> str:
        path = self.path(f'{name}.json')
        with open(path, 'w') as f:
            f.write(json_converter.dumps(data))
        get_middleware().loginfo(f'wrote {path}')
        return path

    # %% tables
    @staticmethod
    def bound_frame(curve: BoundCurve) -> pd.DataFrame:
        return pd.DataFrame({'t': curve.t_grid,
                             'value': curve.values,
                             'clipped': curve.clipped,
                             'provenance': curve.provenance.value})

    @staticmethod
    def empirical_frame(tail: EmpiricalTail) -> pd.DataFrame:
        return pd.DataFrame({'t': tail.t_grid,
                             'empirical': tail.empirical,
                             'lower': np.maximum(0.0, tail.empirical - tail.band_halfwidth),
                             'upper': np.minimum(1.0, tail.empirical + tail.band_halfwidth)})

    @staticmethod
    def report_frame(report: TailReport) -> pd.DataFrame:
        violation = np.zeros(len(report.t_grid), dtype=bool)
        violation[report.violations] = True
        return pd.DataFrame({'t': report.t_grid,
                             'empirical': report.empirical,
                             'lower': report.lower_band,
                             'bound': report.bound.values,
                             'clipped': report.bound.clipped,
                             'violation': violation})

    def write_bound(self, curve: BoundCurve, name: str = 'bound') -> List[str]:
        return [self.write_csv(name, self.bound_frame(curve)),
                self.write_json(name, json_converter.bound_curve_to_json(curve))]

    def write_report(self, report: TailReport, verdict: Optional[Verdict] = None, name: str = 'verify') -> List[str]:
        return [self.write_csv(name, self.report_frame(report)),
                self.write_json(name, json_converter.tail_report_to_json(report, verdict))]

    def write_error(self, e: TailBoundException, name: str = 'error') -> str:
        return self.write_json(name, json_converter.exception_to_json(e))

    def clear_error(self, name: str = 'error'):
        path = self.path(f'{name}.json')
        if os.path.exists(path):
            os.remove(path)


def read_json_reports(out_dir: str) -> Dict[str, Dict[str, Any]]:
    """
    All JSON documents written into out_dir, keyed by file name.
    """
    reports = {}
    for file_name in sorted(os.listdir(out_dir)):
        if not file_name.endswith('.json'):
            continue
        with open(os.path.join(out_dir, file_name), 'r') as f:
            try:
                reports[file_name] = json.load(f)
            except json.JSONDecodeError:
                get_middleware().logwarn(f'skipping {file_name}, not valid JSON')
    return reports
