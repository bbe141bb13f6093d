from __future__ import annotations

import math
from typing import Optional, Sequence, NamedTuple, Tuple

import numpy as np
from line_profiler import profile

from tailbound.bounds.sum_problem import SumProblem
from tailbound.data_types.data_types import BoundCurve, Provenance, Route
from tailbound.data_types.exceptions import InvalidParameterException, InfiniteNormException, \
    NotInClassException
from tailbound.middleware import get_middleware
from tailbound.spaces.functions import TabulatedPsi
from tailbound.spaces.spaces import SpaceDescriptor, LpSpace, GLSSpace, BphiSpace, space_norm, \
    tail_characteristic, is_phi_conv, rosenthal_constant, rosenthal_factor, lp_norm


def default_p_grid() -> np.ndarray:
    return np.unique(np.concatenate([np.geomspace(1, 64, 120), np.arange(1, 65, dtype=float)]))


# %% classical
def classical_bernstein(nu: float, kappa: float, n: int, t: float) -> float:
    """
    2 exp(-t^2 / (2 nu n + 2 kappa t)) for the raw sum; not clipped at 1.
    """
    if nu <= 0 or kappa <= 0 or n < 1:
        raise InvalidParameterException(f'need nu > 0, kappa > 0 and n >= 1, got nu={nu}, kappa={kappa}, n={n}')
    if t < 0:
        raise InvalidParameterException(f'threshold must be non-negative, got {t}')
    return 2 * math.exp(-t * t / (2 * nu * n + 2 * kappa * t))


def classical_bernstein_curve(problem: SumProblem, nu: float, kappa: float, t_grid: Sequence[float]) -> BoundCurve:
    """
    Classical bound expressed on the normalized statistic: threshold t for S_n is t * sqrt(sum sigma_i^2)
    for the raw sum.
    """
    t_grid = np.asarray(t_grid, dtype=float)
    scale = problem.total_sd
    values = np.array([classical_bernstein(nu, kappa, problem.n, t * scale) for t in t_grid])
    return BoundCurve(t_grid, values, Provenance.UPPER, label='classical',
                      metadata={'route': Route.CLASSICAL.value, 'nu': nu, 'kappa': kappa, 'n': problem.n})


# %% relative norms
class KappaVerdict(NamedTuple):
    kappa: float
    member_index: int


@profile
def kappa_relative(problem: SumProblem, space: SpaceDescriptor) -> KappaVerdict:
    """
    max_i ||xi_i / sigma_i||_X over the members that occur in the sum.
    :return: the maximum and the index attaining it; an infinite norm stops the scan at that index
    """
    best, best_index = -math.inf, 0
    for i in problem.active_indices:
        norm = space_norm(problem.member(i).standardized(), space)
        if norm == math.inf:
            return KappaVerdict(math.inf, i)
        if norm > best:
            best, best_index = norm, i
    return KappaVerdict(best, best_index)


def theorem_norm_bound(problem: SumProblem, x_space: SpaceDescriptor, u_const: float) -> float:
    """
    sup_n ||S_n||_Y <= U * kappa_X.
    """
    return u_const * kappa_relative(problem, x_space).kappa


def subgaussian_sum_norm(norms: Sequence[float]) -> float:
    """
    sqrt(sum tau_i^2), the sub-Gaussian standard of an independent sum.
    """
    norms = np.asarray(norms, dtype=float)
    if np.any(norms < 0):
        raise InvalidParameterException('norms must be non-negative')
    return float(np.sqrt(np.sum(norms ** 2)))


def lower_exponent(m: float) -> float:
    if not m > 1:
        raise InvalidParameterException(f'exponent needs m > 1, got {m}')
    return min(m, 2.0)


def lebesgue_riesz_sum_bound(problem: SumProblem, s: float) -> float:
    """
    sup_n ||S_n||_s <= C_s sup_i ||xi_i / sigma_i||_s with C_s the Rosenthal constant.
    """
    return rosenthal_constant(s) * kappa_relative(problem, LpSpace(s)).kappa


# %% route resolution
def _resolve_route(route: Route, x_space: SpaceDescriptor, y_space: Optional[SpaceDescriptor],
                   u_const: Optional[float]) -> Tuple[SpaceDescriptor, float]:
    if route == Route.B2:
        if isinstance(x_space, BphiSpace):
            if not is_phi_conv(x_space.phi):
                raise NotInClassException(f'{x_space.label} is not in B2: phi(sqrt(lambda)) is not convex')
        elif not (isinstance(x_space, LpSpace) and x_space.p == 2):
            raise NotInClassException(f'{x_space.label} is not known to be in B2')
        if u_const is not None and u_const != 1:
            raise InvalidParameterException(f'the B2 route has U = 1, got {u_const}')
        return x_space, 1.0
    if route == Route.WB2:
        if u_const is not None:
            return x_space, float(u_const)
        if isinstance(x_space, LpSpace) and x_space.p > 2:
            return x_space, rosenthal_constant(x_space.p)
        raise NotInClassException(f'no constant K({x_space.label}) is known; pass u_const')
    if route == Route.PAIR:
        if y_space is None or u_const is None:
            raise InvalidParameterException('the pair route needs both a target space and u_const')
        return y_space, float(u_const)
    raise InvalidParameterException(f'route {route.value} is not a space-pair route')


def _curve_values(space: SpaceDescriptor, t_grid: np.ndarray, scale: float) -> np.ndarray:
    values = np.array([tail_characteristic(space, t / scale) for t in t_grid])
    # the exact characteristic is nonincreasing; numerical noise is removed by a running minimum
    order = np.argsort(t_grid, kind='stable')
    values[order] = np.minimum.accumulate(values[order])
    return values


@profile
def modified_tail_bound(problem: SumProblem, x_space: SpaceDescriptor, y_space: Optional[SpaceDescriptor],
                        u_const: Optional[float], t_grid: Sequence[float], route: Route = Route.PAIR) -> BoundCurve:
    """
    P(|S_n| >= t) <= T^Y(t / (kappa_X U)).
    :param route: B2 and WB2 fill in Y and U from X, PAIR uses them as given
    """
    y_space, u_const = _resolve_route(route, x_space, y_space, u_const)
    if not u_const > 0:
        raise InvalidParameterException(f'U must be positive, got {u_const}')
    verdict = kappa_relative(problem, x_space)
    if verdict.kappa == math.inf:
        raise InfiniteNormException(f'member {verdict.member_index} ({problem.member(verdict.member_index).label}) '
                                    f'is not in {x_space.label}', member_index=verdict.member_index)
    scale = verdict.kappa * u_const
    get_middleware().logdebug(f'{route.value}: kappa={verdict.kappa:.9g} (member {verdict.member_index}), U={u_const:.9g}')
    t_grid = np.asarray(t_grid, dtype=float)
    return BoundCurve(t_grid, _curve_values(y_space, t_grid, scale), y_space.provenance,
                      label=f'{route.value}:{x_space.label}->{y_space.label}',
                      metadata={'route': route.value, 'kappa': verdict.kappa, 'member_index': verdict.member_index,
                                'u_const': u_const, 'x_space': x_space.to_json(), 'y_space': y_space.to_json()})


# %% generating-function route
def psi_envelope(problem: SumProblem, p_grid: Sequence[float]) -> Tuple[TabulatedPsi, TabulatedPsi]:
    """
    psi(p) = max_i |xi_i / sigma_i|_p and psi_tilde(p) = C_R p / ln p * psi(p) on p >= 2.
    """
    p_grid = np.unique(np.asarray(p_grid, dtype=float))
    if len(p_grid) == 0 or p_grid[0] < 1:
        raise InvalidParameterException('p grid must be non-empty and start at p >= 1')
    standardized = [problem.member(i).standardized() for i in problem.active_indices]
    psi_values = np.array([max(lp_norm(s, p) for s in standardized) for p in p_grid])
    tilde_mask = p_grid >= 2
    if np.count_nonzero(tilde_mask & np.isfinite(psi_values)) < 2 or not np.any(p_grid > 2):
        raise InvalidParameterException('psi envelope needs at least two finite grid points with p >= 2')
    p_tilde = p_grid[tilde_mask]
    tilde_values = np.array([rosenthal_factor(p) for p in p_tilde]) * psi_values[tilde_mask]
    return (TabulatedPsi(p_grid, psi_values, label='psi_env'),
            TabulatedPsi(p_tilde, tilde_values, label='psi_tilde'))


def gls_rosenthal_bound(problem: SumProblem, t_grid: Sequence[float],
                        p_grid: Optional[Sequence[float]] = None) -> BoundCurve:
    """
    Bound via the moment envelope: ||S_n|| in G(psi_tilde) is at most kappa_psi = max_i ||xi_i/sigma_i||_G(psi).
    """
    psi, psi_tilde = psi_envelope(problem, default_p_grid() if p_grid is None else p_grid)
    curve = modified_tail_bound(problem, GLSSpace(psi), GLSSpace(psi_tilde), 1.0, t_grid, route=Route.PAIR)
    curve.label = f'{Route.GLS_ROSENTHAL.value}:{psi.label}->{psi_tilde.label}'
    curve.metadata['route'] = Route.GLS_ROSENTHAL.value
    return curve


def gls_rosenthal_moment_bound(problem: SumProblem, p: float, p_grid: Optional[Sequence[float]] = None) -> float:
    """
    |S_n|_p <= psi_tilde(p) * kappa_psi for p in the table of psi_tilde.
    """
    psi, psi_tilde = psi_envelope(problem, default_p_grid() if p_grid is None else p_grid)
    kappa = kappa_relative(problem, GLSSpace(psi)).kappa
    value = psi_tilde(p)
    if value == math.inf:
        raise InvalidParameterException(f'p={p} is outside the tabulated range of psi_tilde')
    return value * kappa
