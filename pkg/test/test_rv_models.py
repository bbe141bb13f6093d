import math
import unittest

import numpy as np
import pytest
from hypothesis import given, settings

from tailbound.data_types.data_types import RVKind
from tailbound.data_types.exceptions import InvalidParameterException, NotCenteredException, \
    UnknownCatalogEntryException
from tailbound.model.rv_models import RVSpec, abs_moment, abs_moment_quadrature, variance, mgf, log_mgf, sample, \
    check_bernstein_condition, tail, upper_tail, spec_from_json
from utils_for_tests import weibull_mgf_oracle, centered_specs


class TestConstruction(unittest.TestCase):
    def test_rejects_nonpositive_parameters(self):
        with self.assertRaises(InvalidParameterException):
            RVSpec.gaussian(-1.0)
        with self.assertRaises(InvalidParameterException):
            RVSpec.uniform(0.0)
        with self.assertRaises(InvalidParameterException):
            RVSpec.weibull_sym(1.0)

    def test_bounded_must_be_centered_and_on_simplex(self):
        RVSpec.bounded([-2, 1], [1 / 3, 2 / 3])
        with self.assertRaises(InvalidParameterException):
            RVSpec.bounded([0, 1], [0.5, 0.5])
        with self.assertRaises(InvalidParameterException):
            RVSpec.bounded([-1, 1], [0.5, 0.6])

    def test_two_point_sharp_is_not_centered(self):
        nu = RVSpec.two_point_sharp(2.0, 3.0)
        self.assertFalse(nu.is_centered)
        with self.assertRaises(NotCenteredException):
            variance(nu)

    def test_json_round_trip(self):
        spec = RVSpec.weibull_sym(1.5, 2.0, label='w')
        self.assertEqual(spec_from_json(spec.to_json()), spec)
        with self.assertRaises(UnknownCatalogEntryException):
            spec_from_json({'kind': 'cauchy'})


class TestMoments(unittest.TestCase):
    def test_closed_forms(self):
        self.assertAlmostEqual(abs_moment(RVSpec.rademacher(), 4), 1.0)
        self.assertAlmostEqual(abs_moment(RVSpec.gaussian(1.0), 4), 3.0)
        self.assertAlmostEqual(abs_moment(RVSpec.gaussian(1.0), 1), math.sqrt(2 / math.pi))
        self.assertAlmostEqual(abs_moment(RVSpec.uniform(1.0), 2), 1 / 3)
        self.assertAlmostEqual(abs_moment(RVSpec.weibull_sym(2.0), 2), 1.0)
        self.assertAlmostEqual(abs_moment(RVSpec.bounded([-2, 1], [1 / 3, 2 / 3]), 3), 8 / 3 + 2 / 3)

    def test_two_point_sharp_has_unit_moment(self):
        self.assertEqual(abs_moment(RVSpec.two_point_sharp(10.0, 4.0), 4.0), 1.0)

    def test_quadrature_agrees_with_closed_form(self):
        specs = [RVSpec.rademacher(), RVSpec.gaussian(1.0), RVSpec.gaussian(0.5), RVSpec.uniform(2.0),
                 RVSpec.weibull_sym(1.5), RVSpec.weibull_sym(3.0), RVSpec.bounded([-2, 1], [1 / 3, 2 / 3]),
                 RVSpec.two_point_sharp(3.0, 2.0)]
        for spec in specs:
            for p in [1, 2, 3, 4, 6]:
                expected = abs_moment(spec, p)
                actual = abs_moment_quadrature(spec, p)
                assert abs(actual - expected) <= 1e-6 * expected, f'{spec.label}, p={p}: {actual} vs {expected}'

    def test_variances(self):
        self.assertAlmostEqual(variance(RVSpec.uniform(1.0)), 1 / 3)
        self.assertAlmostEqual(variance(RVSpec.weibull_sym(2.0)), 1.0)
        self.assertAlmostEqual(variance(RVSpec.gaussian(3.0)), 9.0)

    @given(centered_specs())
    @settings(max_examples=30, deadline=None)
    def test_standardized_has_unit_variance(self, spec):
        assert abs(variance(spec.standardized()) - 1) < 1e-12

    def test_standardized_does_not_depend_on_scale(self):
        for spec in [RVSpec.rademacher(), RVSpec.gaussian(1.0), RVSpec.uniform(1.0), RVSpec.weibull_sym(3.0)]:
            for c in [0.5, 2.0, 10.0]:
                assert spec.scaled(c).standardized().params == spec.standardized().params


class TestTails(unittest.TestCase):
    def test_tail_values(self):
        self.assertEqual(tail(RVSpec.rademacher(), 1.0), 1.0)
        self.assertEqual(tail(RVSpec.rademacher(), 1.5), 0.0)
        self.assertAlmostEqual(tail(RVSpec.weibull_sym(2.0), 1.0), math.exp(-1))
        self.assertAlmostEqual(tail(RVSpec.uniform(2.0), 1.0), 0.5)
        self.assertAlmostEqual(tail(RVSpec.two_point_sharp(10.0, 4.0), 10.0), 1e-4)
        self.assertAlmostEqual(tail(RVSpec.two_point_sharp(10.0, 4.0), 3.0), 1e-4)

    def test_upper_tail_is_half_for_symmetric_laws(self):
        for spec in [RVSpec.gaussian(1.0), RVSpec.weibull_sym(1.5), RVSpec.uniform(1.0)]:
            self.assertAlmostEqual(upper_tail(spec, 0.7), 0.5 * tail(spec, 0.7))
        self.assertEqual(upper_tail(RVSpec.rademacher(), 0.5), 0.5)
        self.assertEqual(upper_tail(RVSpec.rademacher(), -1.0), 1.0)


class TestMgf(unittest.TestCase):
    def test_mgf_at_zero_is_one(self):
        for spec in [RVSpec.rademacher(), RVSpec.gaussian(2.0), RVSpec.uniform(1.0), RVSpec.weibull_sym(1.5),
                     RVSpec.two_point_sharp(2.0, 3.0), RVSpec.bounded([-2, 1], [1 / 3, 2 / 3])]:
            assert mgf(spec, 0.0) == 1.0

    def test_closed_forms(self):
        self.assertAlmostEqual(mgf(RVSpec.rademacher(), 1.0), math.cosh(1.0))
        self.assertAlmostEqual(mgf(RVSpec.gaussian(2.0), 0.5), math.exp(0.5))
        self.assertAlmostEqual(mgf(RVSpec.uniform(1.0), 2.0), math.sinh(2.0) / 2.0)
        self.assertAlmostEqual(mgf(RVSpec.uniform(1.0), 1e-5), 1.0)
        self.assertAlmostEqual(mgf(RVSpec.bounded([-2, 1], [1 / 3, 2 / 3]), 1.0),
                               math.exp(-2) / 3 + 2 * math.e / 3)

    def test_weibull_against_density_quadrature(self):
        for m in [1.5, 2.0, 3.0]:
            for lam in [0.1, 1.0, 3.0]:
                expected = weibull_mgf_oracle(m, lam)
                actual = mgf(RVSpec.weibull_sym(m), lam)
                assert abs(actual - expected) <= 1e-7 * expected, f'm={m}, lambda={lam}'

    def test_weibull_large_lambda_stays_finite_in_log_space(self):
        value = log_mgf(RVSpec.weibull_sym(1.5), 50.0)
        assert math.isfinite(value)
        assert value > 0


class TestSampling(unittest.TestCase):
    def test_determinism(self):
        spec = RVSpec.weibull_sym(1.5)
        np.testing.assert_array_equal(sample(spec, 1000, 7), sample(spec, 1000, 7))
        assert not np.array_equal(sample(spec, 1000, 7), sample(spec, 1000, 8))

    def test_gaussian_moments(self):
        x = sample(RVSpec.gaussian(1.0), 10 ** 6, 1)
        assert abs(np.mean(x)) < 0.005
        assert abs(np.var(x) - 1) < 0.01

    def test_weibull_tail(self):
        x = sample(RVSpec.weibull_sym(1.5), 10 ** 6, 2)
        assert abs(np.mean(np.abs(x) > 1) - math.exp(-1)) < 0.002

    def test_bounded_and_two_point(self):
        x = sample(RVSpec.bounded([-2, 1], [1 / 3, 2 / 3]), 10 ** 5, 3)
        assert set(np.unique(x)) == {-2.0, 1.0}
        nu = sample(RVSpec.two_point_sharp(2.0, 1.0), 10 ** 5, 4)
        assert abs(np.mean(nu == 2.0) - 0.5) < 0.01

    def test_rademacher_scale(self):
        x = sample(RVSpec.rademacher(3.0), 100, 5)
        assert set(np.unique(np.abs(x))) == {3.0}

    def test_needs_at_least_one_draw(self):
        with pytest.raises(InvalidParameterException):
            sample(RVSpec.gaussian(1.0), 0, 1)


class TestBernsteinCondition(unittest.TestCase):
    def test_rademacher_holds(self):
        assert check_bernstein_condition([RVSpec.rademacher()], 1.0, 1.0, 10).holds

    def test_gaussian_holds(self):
        assert check_bernstein_condition([RVSpec.gaussian(1.0)], 1.0, 1.0, 8).holds

    def test_small_nu_fails_at_second_moment(self):
        result = check_bernstein_condition([RVSpec.rademacher()], 0.1, 1.0, 4)
        assert not result.holds
        assert result.member_index == 0
        assert result.m == 2

    def test_reports_first_violating_member(self):
        result = check_bernstein_condition([RVSpec.rademacher(), RVSpec.gaussian(1.0)], 1.0, 0.5, 6)
        assert result == (False, 1, 3)

    def test_parameter_validation(self):
        with pytest.raises(InvalidParameterException):
            check_bernstein_condition([RVSpec.rademacher()], -1.0, 1.0, 4)
        with pytest.raises(InvalidParameterException):
            check_bernstein_condition([RVSpec.rademacher()], 1.0, 1.0, 1)


def test_kinds_cover_catalog():
    assert {k.value for k in RVKind} == {'rademacher', 'gaussian', 'uniform', 'two_point_sharp', 'weibull_sym',
                                         'bounded'}
