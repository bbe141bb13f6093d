import json
from typing import Dict, Any, Optional, List

import numpy as np

from tailbound.data_types.data_types import BoundCurve, Provenance
from tailbound.data_types.exceptions import TailBoundException, ConfigException
from tailbound.harness.empirical import TailReport, Verdict, ExponentEstimate
from tailbound.utils.utils import float_to_json, float_from_json, get_all_classes_in_module

report_version = 1


def floats_to_json(values: np.ndarray) -> List:
    return [float_to_json(x) for x in np.asarray(values, dtype=float)]


def floats_from_json(values: List) -> np.ndarray:
    return np.array([float_from_json(x) for x in values], dtype=float)


def _metadata_to_json(metadata: Dict[str, Any]) -> Dict[str, Any]:
    result = {}
    for key, value in metadata.items():
        if isinstance(value, (float, np.floating)):
            result[key] = float_to_json(value)
        elif isinstance(value, np.integer):
            result[key] = int(value)
        else:
            result[key] = value
    return result


# %% to json
def bound_curve_to_json(curve: BoundCurve) -> Dict[str, Any]:
    return {'type': 'bound',
            'version': report_version,
            'label': curve.label,
            'provenance': curve.provenance.value,
            't': floats_to_json(curve.t_grid),
            'value': floats_to_json(curve.values),
            'clipped': floats_to_json(curve.clipped),
            'metadata': _metadata_to_json(curve.metadata)}


def tail_report_to_json(report: TailReport, verdict: Optional[Verdict] = None) -> Dict[str, Any]:
    data = {'type': 'tail_report',
            'version': report_version,
            't': floats_to_json(report.t_grid),
            'empirical': floats_to_json(report.empirical),
            'band_halfwidth': float_to_json(report.band_halfwidth),
            'bound': bound_curve_to_json(report.bound),
            'violations': [int(i) for i in report.violations],
            'reps': int(report.reps),
            'delta': float_to_json(report.delta),
            'seed': report.seed,
            'metadata': _metadata_to_json(report.metadata)}
    if verdict is not None:
        data['verdict'] = verdict_to_json(verdict)
    return data


def verdict_to_json(verdict: Verdict) -> Dict[str, Any]:
    return {'passed': bool(verdict.passed),
            'violations': [int(i) for i in verdict.violations],
            'magnitudes': floats_to_json(verdict.magnitudes),
            'max_violation': float_to_json(verdict.max_violation)}


def exponent_to_json(estimate: ExponentEstimate, **extra) -> Dict[str, Any]:
    data = {'type': 'exponent',
            'version': report_version,
            'slope': float_to_json(estimate.slope),
            'stderr': float_to_json(estimate.stderr),
            'intercept': float_to_json(estimate.intercept),
            'points': estimate.points}
    data.update(_metadata_to_json(extra))
    return data


def exception_to_json(e: TailBoundException) -> Dict[str, Any]:
    return {'type': 'error', 'error_code': e.error_code, 'exception': e.__class__.__name__, 'msg': e.msg}


# %% from json
def bound_curve_from_json(data: Dict[str, Any]) -> BoundCurve:
    try:
        return BoundCurve(t_grid=floats_from_json(data['t']),
                          values=floats_from_json(data['value']),
                          provenance=Provenance(data['provenance']),
                          label=data.get('label', ''),
                          metadata=dict(data.get('metadata', {})))
    except (KeyError, ValueError) as e:
        raise ConfigException(f'malformed bound report: {e}')


def verdict_from_json(data: Dict[str, Any]) -> Verdict:
    return Verdict(passed=bool(data['passed']),
                   violations=np.array(data['violations'], dtype=int),
                   magnitudes=floats_from_json(data['magnitudes']))


def tail_report_from_json(data: Dict[str, Any]) -> TailReport:
    try:
        return TailReport(t_grid=floats_from_json(data['t']),
                          empirical=floats_from_json(data['empirical']),
                          band_halfwidth=float_from_json(data['band_halfwidth']),
                          bound=bound_curve_from_json(data['bound']),
                          violations=np.array(data['violations'], dtype=int),
                          reps=int(data['reps']),
                          delta=float_from_json(data['delta']),
                          seed=data.get('seed'),
                          metadata=dict(data.get('metadata', {})))
    except (KeyError, ValueError) as e:
        raise ConfigException(f'malformed tail report: {e}')


def exponent_from_json(data: Dict[str, Any]) -> ExponentEstimate:
    return ExponentEstimate(slope=float_from_json(data['slope']),
                            stderr=float_from_json(data['stderr']),
                            intercept=float_from_json(data['intercept']),
                            points=int(data['points']))


exception_classes = get_all_classes_in_module('tailbound.data_types.exceptions', TailBoundException)


def exception_from_json(data: Dict[str, Any]) -> TailBoundException:
    name = data.get('exception')
    if name in exception_classes:
        return exception_classes[name](data.get('msg', ''))
    return TailBoundException.from_error_code(int(data.get('error_code', 2)), data.get('msg', ''))


def dumps(data: Dict[str, Any]) -> str:
    return json.dumps(data, indent=2, sort_keys=True)
