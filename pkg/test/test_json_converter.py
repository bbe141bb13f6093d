import math

import numpy as np

from tailbound.converters import json_converter
from tailbound.converters.report_writer import ReportWriter, read_json_reports
from tailbound.data_types.data_types import BoundCurve, Provenance
from tailbound.harness.empirical import build_tail_report, verify_bound, ExponentEstimate
from tailbound.utils.utils import float_to_json, float_from_json, round_significant


def make_curve() -> BoundCurve:
    return BoundCurve(np.array([0.0, 1.0, 2.0]), np.array([2.0, 1 / 3, math.pi * 1e-5]), Provenance.UPPER,
                      label='test', metadata={'kappa': 1 / 7, 'route': 'b2'})


def test_float_helpers():
    assert float_to_json(math.inf) == 'inf'
    assert float_to_json(-math.inf) == '-inf'
    assert float_to_json(np.float64(1 / 3)) == 0.333333333
    assert float_from_json('inf') == math.inf
    assert float_from_json(None) == math.inf
    assert round_significant(123456789012.0) == 123456789000.0


def test_bound_curve_keeps_nine_significant_digits():
    curve = make_curve()
    data = json_converter.bound_curve_to_json(curve)
    assert data['clipped'][0] == 1.0
    parsed = json_converter.bound_curve_from_json(data)
    np.testing.assert_allclose(parsed.values, curve.values, rtol=1e-8)
    assert parsed.provenance == Provenance.UPPER
    assert parsed.metadata['kappa'] == 0.142857143


def test_tail_report_document(tmp_path):
    curve = make_curve()
    report = build_tail_report(np.array([0.5, -1.5, 2.5, 0.1]), curve, 0.05, seed=3)
    verdict = verify_bound(report)
    writer = ReportWriter(str(tmp_path))
    writer.write_report(report, verdict)
    documents = read_json_reports(str(tmp_path))
    data = documents['verify.json']
    assert data['verdict']['passed'] == verdict.passed
    parsed = json_converter.tail_report_from_json(data)
    np.testing.assert_allclose(parsed.empirical, report.empirical)
    np.testing.assert_array_equal(parsed.violations, report.violations)
    assert parsed.seed == 3
    assert parsed.bound.label == 'test'


def test_infinite_values_survive(tmp_path):
    curve = BoundCurve(np.array([0.0]), np.array([math.inf]), Provenance.UPPER)
    writer = ReportWriter(str(tmp_path), prefix='p')
    writer.write_bound(curve)
    data = read_json_reports(str(tmp_path))['p_bound.json']
    assert data['value'] == ['inf']
    assert json_converter.bound_curve_from_json(data).values[0] == math.inf


def test_exponent_document():
    estimate = ExponentEstimate(slope=1.5, stderr=0.01, intercept=-0.2, points=40)
    data = json_converter.exponent_to_json(estimate, m=1.5, passed=True)
    assert data['passed'] is True
    assert json_converter.exponent_from_json(data) == estimate
