import json
import math
import os
from typing import Dict, Any

import hypothesis.strategies as st
import numpy as np
from hypothesis.strategies import composite
from scipy import integrate, optimize

from tailbound.model.rv_models import RVSpec, abs_moment

BIG_NUMBER = 1e100
SMALL_NUMBER = 1e-100

sub_gaussian_phi = {'name': 'quadratic', 'lambda0': None}


def float_no_nan_no_inf(min_value=-1e3, max_value=1e3):
    return st.floats(allow_nan=False, allow_infinity=False, min_value=min_value, max_value=max_value)


def positive_scale():
    return st.sampled_from([0.5, 2.0, 10.0])


@composite
def centered_specs(draw):
    kind = draw(st.sampled_from(['rademacher', 'gaussian', 'uniform', 'weibull', 'bounded']))
    scale = draw(st.floats(min_value=0.1, max_value=5.0))
    if kind == 'rademacher':
        return RVSpec.rademacher(scale)
    if kind == 'gaussian':
        return RVSpec.gaussian(scale)
    if kind == 'uniform':
        return RVSpec.uniform(scale)
    if kind == 'weibull':
        return RVSpec.weibull_sym(draw(st.sampled_from([1.5, 2.0, 3.0])), scale)
    return RVSpec.bounded([-2 * scale, scale], [1 / 3, 2 / 3])


def brute_force_gls_norm(spec: RVSpec, psi, p_max: float = 512.0, points: int = 200001) -> float:
    """
    Dense-grid supremum of |xi|_p / psi(p).
    """
    grid = np.geomspace(1.0, p_max, points)
    ratios = [abs_moment(spec, p) ** (1 / p) / psi(p) for p in grid]
    return float(np.max(ratios))


def brute_force_bphi_norm(log_mgf_envelope, phi, lam) -> float:
    """
    max over lam of phi^-1(ln E exp(lam xi)) / lam, with phi inverted by bisection.
    """
    ratios = []
    for x in lam:
        target = log_mgf_envelope(x)
        if target <= 0:
            ratios.append(0.0)
            continue
        hi = 1.0
        while float(phi(hi)) < target:
            hi *= 2
        root = optimize.bisect(lambda a: float(phi(a)) - target, 0.0, hi, xtol=1e-15, rtol=1e-14)
        ratios.append(root / x)
    return float(np.max(ratios))


def weibull_mgf_oracle(m: float, lam: float) -> float:
    """
    E cosh(lam W) with P(W > w) = exp(-w^m), by plain quadrature of the density.
    """
    value, _ = integrate.quad(lambda w: math.cosh(lam * w) * m * w ** (m - 1) * math.exp(-w ** m), 0, np.inf,
                              epsabs=0, epsrel=1e-11, limit=500)
    return value


def write_config(directory: str, data: Dict[str, Any], name: str = 'config.json') -> str:
    os.makedirs(directory, exist_ok=True)
    path = os.path.join(directory, name)
    with open(path, 'w') as f:
        json.dump(data, f)
    return path


def rademacher_config(**overrides) -> Dict[str, Any]:
    config = {'label': 'rademacher',
              'problem': {'members': [{'kind': 'rademacher', 'params': {}}], 'n': 100},
              'route': 'b2',
              'space_x': {'space': 'bphi', 'phi': dict(sub_gaussian_phi)},
              't_grid': {'start': 0, 'stop': 4, 'num': 41},
              'sim': {'reps': 20000, 'seed': 1, 'maximal': False, 'delta': 0.01}}
    config.update(overrides)
    return config
