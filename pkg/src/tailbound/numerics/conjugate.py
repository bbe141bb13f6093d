from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, TYPE_CHECKING

from line_profiler import profile

from tailbound.configs.numerics_config import numerics
from tailbound.data_types.exceptions import InvalidParameterException, EmptyDomainException
from tailbound.numerics.optimize import scan_and_refine

if TYPE_CHECKING:
    from tailbound.spaces.functions import GeneratingFunction, YoungFunction, SlowlyVarying


@dataclass
class DomainFunction:
    """
    A real function together with the interval it is defined on. Endpoints are treated as open.
    """
    eval: Callable[[float], float]
    lo: float
    hi: float
    grid_hint: int = 512
    label: str = ''

    def __post_init__(self):
        if math.isnan(self.lo) or math.isnan(self.hi) or self.lo > self.hi:
            raise EmptyDomainException(f'{self.label or "function"} has an empty domain [{self.lo}, {self.hi}]')

    def __call__(self, x: float) -> float:
        return self.eval(x)


@profile
def legendre_transform(g: DomainFunction, u: float) -> float:
    """
    g*(u) = sup_{y in Dom g} (y u - g(y)) for u >= 0.
    :return: the supremum, math.inf if the objective is unbounded
    """
    if not u >= 0:
        raise InvalidParameterException(f'conjugate argument must be non-negative, got {u}')
    return _sup_affine_gap(g, u)


def _sup_affine_gap(g: DomainFunction, u: float) -> float:
    def objective(y: float) -> float:
        value = g.eval(y)
        if value == math.inf:
            return -math.inf
        return y * u - value

    result = scan_and_refine(objective, g.lo, g.hi, n=g.grid_hint or numerics.scan_points)
    if result.value == -math.inf:
        raise EmptyDomainException(f'{g.label or "function"} is +inf on its whole domain')
    return result.value


def conjugate(g: DomainFunction) -> DomainFunction:
    return DomainFunction(eval=lambda u: legendre_transform(g, u), lo=0.0, hi=math.inf,
                          grid_hint=g.grid_hint, label=f'({g.label})*')


def nu_transform(phi: YoungFunction, x: float) -> float:
    """
    nu(x) = sup_{0 <= lambda < lambda0} (lambda x - phi(lambda)).
    """
    if not x >= 0:
        raise InvalidParameterException(f'nu is evaluated on x >= 0, got {x}')
    if x == 0:
        return 0.0
    restricted = DomainFunction(eval=phi, lo=0.0, hi=phi.lambda0, label=phi.label)
    return max(0.0, legendre_transform(restricted, x))


def h_star(psi: GeneratingFunction, y: float) -> float:
    """
    Conjugate of h(p) = p ln psi(p) over the domain of psi, for any real y.
    """
    lo, hi = psi.support()

    def h(p: float) -> float:
        value = psi(p)
        if value == math.inf:
            return math.inf
        return p * math.log(value)

    if math.isnan(y):
        raise InvalidParameterException('h* argument is nan')
    return _sup_affine_gap(DomainFunction(eval=h, lo=lo, hi=hi, label=f'h[{psi.label}]'), y)


def g_ml_asymptotic(m: float, L: SlowlyVarying, t: float) -> float:
    """
    Leading term of the conjugate of phi_{m,L} for large t.
    """
    if m < 2:
        raise InvalidParameterException(f'asymptotic conjugate needs m >= 2, got {m}')
    if t <= 0:
        raise InvalidParameterException(f't must be positive, got {t}')
    return (m - 1) / m * t ** (m / (m - 1)) * L(t ** (1 / (m - 1))) ** (-1 / (m - 1))
