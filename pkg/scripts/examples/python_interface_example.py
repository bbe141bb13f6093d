#!/usr/bin/env python
import numpy as np

from tailbound.bounds.bounds import modified_tail_bound, classical_bernstein_curve, kappa_relative
from tailbound.bounds.sum_problem import SumProblem
from tailbound.data_types.data_types import Route
from tailbound.harness.empirical import build_tail_report, verify_bound
from tailbound.harness.simulation import SimulationRun, simulate_sn
from tailbound.model.rv_models import RVSpec
from tailbound.spaces.functions import QuadraticPhi
from tailbound.spaces.spaces import BphiSpace

if __name__ == '__main__':
    problem = SumProblem([RVSpec.rademacher(), RVSpec.uniform(2.0)], n=100)
    sub_gaussian = BphiSpace(QuadraticPhi())
    t_grid = np.linspace(0, 4, 41)

    print('kappa:', kappa_relative(problem, sub_gaussian))
    modified = modified_tail_bound(problem, sub_gaussian, None, None, t_grid, route=Route.B2)
    classical = classical_bernstein_curve(problem, nu=4 / 3, kappa=1.0, t_grid=t_grid)

    samples = simulate_sn(SimulationRun(problem, reps=200_000, seed=42), threads=4)
    for curve in (modified, classical):
        verdict = verify_bound(build_tail_report(samples, curve, delta=0.01, seed=42))
        print(f'{curve.label}: passed={verdict.passed}')
