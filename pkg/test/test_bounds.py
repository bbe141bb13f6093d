import math
import unittest

import numpy as np
import pytest

from tailbound.bounds.bounds import classical_bernstein, classical_bernstein_curve, kappa_relative, \
    theorem_norm_bound, subgaussian_sum_norm, lower_exponent, lebesgue_riesz_sum_bound, modified_tail_bound, \
    psi_envelope, gls_rosenthal_bound, gls_rosenthal_moment_bound
from tailbound.bounds.sum_problem import SumProblem
from tailbound.data_types.data_types import Route, Provenance
from tailbound.data_types.exceptions import InvalidParameterException, NotInClassException, \
    InfiniteNormException, NotCenteredException
from tailbound.model.rv_models import RVSpec
from tailbound.spaces.functions import QuadraticPhi, SubQuadraticPhi, ConstantPsi, PowerPsi
from tailbound.spaces.spaces import LpSpace, GLSSpace, BphiSpace, rosenthal_constant, lp_norm, tail_characteristic

t_grid = np.linspace(0, 4, 41)
sub_gaussian = BphiSpace(QuadraticPhi())


def rademacher_problem(n: int = 100) -> SumProblem:
    return SumProblem([RVSpec.rademacher()], n)


def mixed_problem(n: int = 60) -> SumProblem:
    return SumProblem([RVSpec.rademacher(), RVSpec.gaussian(2.0), RVSpec.uniform(3.0)], n)


class TestSumProblem(unittest.TestCase):
    def test_members_cycle(self):
        problem = SumProblem([RVSpec.rademacher(), RVSpec.gaussian(2.0)], 5)
        np.testing.assert_allclose(problem.sigmas, [1, 2, 1, 2, 1])
        self.assertAlmostEqual(problem.total_sd, math.sqrt(11))
        assert problem.member(3) == RVSpec.gaussian(2.0)

    def test_active_indices(self):
        assert list(SumProblem([RVSpec.rademacher(), RVSpec.gaussian(1.0)], 1).active_indices) == [0]

    def test_rejects_uncentered_member(self):
        with pytest.raises(NotCenteredException):
            SumProblem([RVSpec.two_point_sharp(2.0, 3.0)], 4)

    def test_rejects_bad_n(self):
        with pytest.raises(InvalidParameterException):
            SumProblem([RVSpec.rademacher()], 0)

    def test_json_round_trip(self):
        problem = mixed_problem()
        assert SumProblem.from_json(problem.to_json()) == problem


class TestClassicalBernstein(unittest.TestCase):
    def test_value(self):
        self.assertAlmostEqual(classical_bernstein(1, 1, 100, 10), 2 * math.exp(-100 / 220))
        self.assertAlmostEqual(classical_bernstein(1, 1, 100, 10), 1.269472, places=5)

    def test_zero_threshold_is_not_clipped(self):
        assert classical_bernstein(1, 1, 100, 0) == 2.0

    def test_curve_is_on_normalized_scale(self):
        problem = rademacher_problem()
        curve = classical_bernstein_curve(problem, 1.0, 1.0, [0.0, 1.0])
        assert curve.values[0] == 2.0
        assert curve.clipped[0] == 1.0
        self.assertAlmostEqual(curve.values[1], classical_bernstein(1, 1, 100, 10))
        assert curve.provenance == Provenance.UPPER

    def test_invalid(self):
        with pytest.raises(InvalidParameterException):
            classical_bernstein(0, 1, 100, 1)


class TestKappa(unittest.TestCase):
    def test_gaussians_are_standardized(self):
        problem = SumProblem([RVSpec.gaussian(1.0), RVSpec.gaussian(2.0), RVSpec.gaussian(5.0)], 3)
        self.assertAlmostEqual(kappa_relative(problem, sub_gaussian).kappa, 1.0, places=6)

    def test_scale_invariance(self):
        problem = SumProblem([RVSpec.rademacher(), RVSpec.uniform(1.0), RVSpec.weibull_sym(3.0)], 10)
        for space in [LpSpace(4), sub_gaussian, GLSSpace(PowerPsi(0.5))]:
            base = kappa_relative(problem, space).kappa
            scaled = kappa_relative(problem.scaled(3.0), space).kappa
            assert abs(scaled - base) <= 1e-9 * base

    def test_maximizing_member(self):
        problem = SumProblem([RVSpec.rademacher(), RVSpec.weibull_sym(1.5)], 2)
        verdict = kappa_relative(problem, LpSpace(4))
        assert verdict.member_index == 1
        self.assertAlmostEqual(verdict.kappa, lp_norm(RVSpec.weibull_sym(1.5).standardized(), 4))

    def test_infinite_member(self):
        problem = SumProblem([RVSpec.rademacher(), RVSpec.gaussian(1.0)], 2)
        verdict = kappa_relative(problem, GLSSpace(ConstantPsi()))
        assert verdict == (math.inf, 1)

    def test_bounded_members_stay_in_constant_psi_space(self):
        problem = SumProblem([RVSpec.uniform(1.0)], 10)
        verdict = kappa_relative(problem, GLSSpace(ConstantPsi()))
        self.assertAlmostEqual(verdict.kappa, math.sqrt(3), places=9)
        assert verdict.member_index == 0

    def test_theorem_norm_bound(self):
        self.assertAlmostEqual(theorem_norm_bound(rademacher_problem(), LpSpace(4), 2.5), 2.5)


class TestHelpers(unittest.TestCase):
    def test_subgaussian_sum_norm(self):
        assert subgaussian_sum_norm([3, 4]) == 5.0

    def test_lower_exponent(self):
        assert lower_exponent(1.5) == 1.5
        assert lower_exponent(3) == 2.0
        with pytest.raises(InvalidParameterException):
            lower_exponent(1)

    def test_lebesgue_riesz(self):
        self.assertAlmostEqual(lebesgue_riesz_sum_bound(rademacher_problem(), 4), rosenthal_constant(4))


class TestModifiedTailBound(unittest.TestCase):
    def test_b2_rademacher(self):
        curve = modified_tail_bound(rademacher_problem(), sub_gaussian, None, None, t_grid, route=Route.B2)
        self.assertAlmostEqual(curve.value_at(2.0), math.exp(-2), places=6)
        self.assertAlmostEqual(curve.metadata['kappa'], 1.0, places=6)
        assert curve.metadata['u_const'] == 1.0
        assert curve.provenance == Provenance.UPPER

    def test_b2_accepts_l2(self):
        curve = modified_tail_bound(rademacher_problem(), LpSpace(2), None, None, [2.0], route=Route.B2)
        self.assertAlmostEqual(curve.values[0], 0.25)
        assert curve.provenance == Provenance.EXACT

    def test_b2_refuses_non_members(self):
        with pytest.raises(NotInClassException):
            modified_tail_bound(rademacher_problem(), BphiSpace(SubQuadraticPhi(1.6)), None, None, t_grid,
                                route=Route.B2)
        with pytest.raises(NotInClassException):
            modified_tail_bound(rademacher_problem(), LpSpace(4), None, None, t_grid, route=Route.B2)

    def test_wb2_lp4_rademacher(self):
        curve = modified_tail_bound(rademacher_problem(), LpSpace(4), None, None, [20.0], route=Route.WB2)
        self.assertAlmostEqual(curve.values[0], (20 / rosenthal_constant(4)) ** -4, places=12)
        self.assertAlmostEqual(curve.metadata['u_const'], 5.125549, places=5)

    def test_wb2_lp4_uniform(self):
        problem = SumProblem([RVSpec.uniform(1.0)], 50)
        kappa = (9 / 5) ** 0.25
        curve = modified_tail_bound(problem, LpSpace(4), None, None, [20.0], route=Route.WB2)
        self.assertAlmostEqual(curve.values[0], (20 / (kappa * rosenthal_constant(4))) ** -4, places=12)

    def test_wb2_without_known_constant(self):
        with pytest.raises(NotInClassException):
            modified_tail_bound(rademacher_problem(), GLSSpace(PowerPsi(0.5)), None, None, t_grid, route=Route.WB2)

    def test_pair_needs_target_and_constant(self):
        with pytest.raises(InvalidParameterException):
            modified_tail_bound(rademacher_problem(), LpSpace(4), LpSpace(4), None, t_grid, route=Route.PAIR)

    def test_pair_uses_target_space(self):
        curve = modified_tail_bound(rademacher_problem(), LpSpace(4), LpSpace(2), 2.0, [4.0], route=Route.PAIR)
        self.assertAlmostEqual(curve.values[0], 0.25)

    def test_infinite_norm_names_member(self):
        problem = SumProblem([RVSpec.rademacher(), RVSpec.gaussian(1.0)], 10)
        with self.assertRaises(InfiniteNormException) as cm:
            modified_tail_bound(problem, GLSSpace(ConstantPsi()), LpSpace(2), 1.0, t_grid, route=Route.PAIR)
        assert cm.exception.member_index == 1

    def test_curves_are_nonincreasing_and_scale_free(self):
        problem = SumProblem([RVSpec.rademacher(), RVSpec.uniform(1.0)], 20)
        curve = modified_tail_bound(problem, sub_gaussian, None, None, t_grid, route=Route.B2)
        assert np.all(np.diff(curve.values) <= 0)
        scaled = modified_tail_bound(problem.scaled(7.0), sub_gaussian, None, None, t_grid, route=Route.B2)
        np.testing.assert_allclose(scaled.values, curve.values, rtol=1e-9)

    def test_wb2_equals_pair_with_rosenthal_constant(self):
        problem = mixed_problem()
        grid = np.linspace(0, 30, 61)
        for p in [3, 4, 6]:
            space = LpSpace(p)
            wb2 = modified_tail_bound(problem, space, None, None, grid, route=Route.WB2)
            pair = modified_tail_bound(problem, space, space, rosenthal_constant(p), grid, route=Route.PAIR)
            np.testing.assert_array_equal(wb2.values, pair.values)
            explicit = modified_tail_bound(problem, space, None, rosenthal_constant(p), grid, route=Route.WB2)
            np.testing.assert_array_equal(explicit.values, pair.values)

    def test_pair_with_unit_constant_is_the_relative_tail(self):
        problem = mixed_problem()
        for space in [sub_gaussian, LpSpace(2), LpSpace(4), GLSSpace(PowerPsi(1.0))]:
            curve = modified_tail_bound(problem, space, space, 1.0, t_grid, route=Route.PAIR)
            kappa = kappa_relative(problem, space).kappa
            expected = [tail_characteristic(space, t / kappa) for t in t_grid]
            np.testing.assert_allclose(curve.values, expected, rtol=1e-8, atol=1e-15)

    def test_b2_equals_pair_with_unit_constant(self):
        problem = mixed_problem()
        b2 = modified_tail_bound(problem, sub_gaussian, None, None, t_grid, route=Route.B2)
        pair = modified_tail_bound(problem, sub_gaussian, sub_gaussian, 1.0, t_grid, route=Route.PAIR)
        np.testing.assert_array_equal(b2.values, pair.values)

    def test_modified_below_classical_for_rademacher(self):
        problem = rademacher_problem(100)
        grid = np.linspace(5, 15, 41)
        modified = modified_tail_bound(problem, sub_gaussian, None, None, grid, route=Route.B2)
        classical = classical_bernstein_curve(problem, 1.0, 1.0, grid)
        assert np.all(modified.values <= classical.values)
        np.testing.assert_allclose(modified.values, np.exp(-grid ** 2 / 2), rtol=1e-3)


class TestGLSRosenthal(unittest.TestCase):
    p_grid = [1, 2, 3, 4, 8]

    def test_envelope(self):
        problem = SumProblem([RVSpec.rademacher(), RVSpec.gaussian(2.0)], 2)
        psi, psi_tilde = psi_envelope(problem, self.p_grid)
        self.assertAlmostEqual(psi(4), 3 ** 0.25, places=9)
        self.assertAlmostEqual(psi(1), 1.0, places=9)
        self.assertAlmostEqual(psi_tilde(4), rosenthal_constant(4) * 3 ** 0.25, places=9)
        self.assertAlmostEqual(psi_tilde(4), 6.746349, places=2)
        assert psi_tilde(1.5) == math.inf

    def test_envelope_needs_room_above_two(self):
        with pytest.raises(InvalidParameterException):
            psi_envelope(rademacher_problem(), [1, 2])

    def test_moment_bound_dominates_simulation(self):
        problem = mixed_problem()
        bound = gls_rosenthal_moment_bound(problem, 4)
        rng = np.random.default_rng(3)
        reps = 20000
        total = np.zeros(reps)
        for i in range(problem.n):
            spec = problem.member(i)
            if spec.kind.value == 'rademacher':
                total += 2.0 * rng.integers(0, 2, reps) - 1.0
            elif spec.kind.value == 'gaussian':
                total += rng.normal(0, 2.0, reps)
            else:
                total += rng.uniform(-3.0, 3.0, reps)
        estimate = np.mean((total / problem.total_sd) ** 4) ** 0.25
        assert estimate <= bound

    def test_kappa_of_envelope_is_close_to_one(self):
        problem = mixed_problem()
        psi, _ = psi_envelope(problem, [1, 2, 3, 4, 6, 8, 12, 16])
        kappa = kappa_relative(problem, GLSSpace(psi)).kappa
        assert 0.999 <= kappa <= 1.01

    def test_curve(self):
        curve = gls_rosenthal_bound(mixed_problem(), t_grid)
        assert curve.metadata['route'] == Route.GLS_ROSENTHAL.value
        assert np.all(np.diff(curve.values) <= 0)
        assert np.all(curve.clipped <= 1)
        assert curve.provenance == Provenance.UPPER
