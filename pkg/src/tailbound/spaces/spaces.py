from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Dict, Any, Tuple, Union, Sequence

import numpy as np
import pandas as pd
from line_profiler import profile

from tailbound.configs.numerics_config import numerics
from tailbound.data_types.data_types import Provenance
from tailbound.data_types.exceptions import InvalidParameterException, UnknownCatalogEntryException
from tailbound.middleware import get_middleware
from tailbound.model.rv_models import RVSpec, log_abs_moment, log_mgf, tail, upper_tail
from tailbound.numerics.conjugate import h_star, nu_transform
from tailbound.numerics.optimize import golden_section_maximize, clamp_offset
from tailbound.spaces.functions import GeneratingFunction, YoungFunction, psi_from_json, phi_from_json

rosenthal_c_r = 1.77638


# %% descriptors
@dataclass(frozen=True)
class LpSpace:
    p: float

    def __post_init__(self):
        if not self.p >= 1:
            raise InvalidParameterException(f'L_p needs p >= 1, got {self.p}')

    @property
    def provenance(self) -> Provenance:
        return Provenance.EXACT

    @property
    def label(self) -> str:
        return f'L{self.p:g}'

    def to_json(self) -> Dict[str, Any]:
        return {'space': 'lp', 'p': self.p}


@dataclass(frozen=True)
class GLSSpace:
    psi: GeneratingFunction

    @property
    def provenance(self) -> Provenance:
        return Provenance.UPPER

    @property
    def label(self) -> str:
        return f'G({self.psi.label})'

    def to_json(self) -> Dict[str, Any]:
        return {'space': 'gls', 'psi': self.psi.to_json()}


@dataclass(frozen=True)
class BphiSpace:
    phi: YoungFunction

    @property
    def provenance(self) -> Provenance:
        return Provenance.UPPER

    @property
    def label(self) -> str:
        return f'B({self.phi.label})'

    def to_json(self) -> Dict[str, Any]:
        return {'space': 'bphi', 'phi': self.phi.to_json()}


SpaceDescriptor = Union[LpSpace, GLSSpace, BphiSpace]


def space_from_json(data: Dict[str, Any]) -> SpaceDescriptor:
    kind = data.get('space')
    try:
        if kind == 'lp':
            return LpSpace(float(data['p']))
        if kind == 'gls':
            return GLSSpace(psi_from_json(data['psi']))
        if kind == 'bphi':
            return BphiSpace(phi_from_json(data['phi']))
    except KeyError as e:
        raise InvalidParameterException(f'space {kind!r} misses field {e}')
    raise UnknownCatalogEntryException(f'unknown space {kind!r}, known: bphi, gls, lp')


def tail_provenance(space: SpaceDescriptor) -> Provenance:
    return space.provenance


# %% norms
def lp_norm(spec: RVSpec, p: float) -> float:
    """
    (E|xi|^p)^(1/p)
    """
    if not p >= 1:
        raise InvalidParameterException(f'L_p norm needs p >= 1, got {p}')
    return math.exp(log_abs_moment(spec, p) / p)


def _gls_log_ratio(spec: RVSpec, psi: GeneratingFunction, p: float) -> float:
    value = psi(p)
    if value == math.inf:
        return -math.inf
    return log_abs_moment(spec, p) / p - math.log(value)


@profile
def gls_norm(spec: RVSpec, psi: GeneratingFunction) -> float:
    """
    sup_p |xi|_p / psi(p) over the domain of psi. For b = inf the search stops at p_cap; a ratio that is still
    growing at 2 p_cap and 4 p_cap without slowing down is reported as divergent (math.inf).
    """
    lo, hi = psi.support()
    if lo == hi:
        return lp_norm(spec, lo) / psi(lo)
    unbounded = not math.isfinite(hi)
    if unbounded:
        upper = max(numerics.p_cap, lo * 2)
    elif psi(hi) < math.inf:
        upper = hi
    else:
        upper = hi - clamp_offset(hi)
    grid = np.geomspace(lo, upper, numerics.gls_grid_points)
    values = np.array([_gls_log_ratio(spec, psi, p) for p in grid])
    if np.all(values == -np.inf):
        return 0.0
    k = int(np.argmax(values))
    best = values[k]
    if len(grid) > 1:
        a, b = math.log(grid[max(k - 1, 0)]), math.log(grid[min(k + 1, len(grid) - 1)])
        _, refined = golden_section_maximize(lambda log_p: _gls_log_ratio(spec, psi, math.exp(log_p)), a, b)
        best = max(best, refined)
    if unbounded:
        r1 = values[-1]
        r2 = _gls_log_ratio(spec, psi, 2 * upper)
        r4 = _gls_log_ratio(spec, psi, 4 * upper)
        best = max(best, r2, r4)
        if spec.is_bounded:
            # |xi|_p rises to |xi|_inf, a flat psi tail caps the ratio there
            psi_2, psi_4 = psi(2 * upper), psi(4 * upper)
            if math.isfinite(psi_4) and psi_4 <= psi_2 * (1 + 1e-9):
                best = max(best, math.log(spec.support_bound) - math.log(psi_4))
            return math.exp(best)
        d1, d2 = r2 - r1, r4 - r2
        # a limit r_inf - a/p gives d2 = d1 / 2, logarithmic growth gives d2 = d1
        if d1 > 1e-12 and d2 > 1e-12 and d2 >= numerics.gls_divergence_ratio * d1:
            get_middleware().logdebug(f'|{spec.label}|_p / {psi.label} keeps growing past p={upper:g}, '
                                      f'reporting divergence')
            return math.inf
    return math.exp(best)


def _bphi_log_mgf_envelope(spec: RVSpec, lam: np.ndarray) -> np.ndarray:
    positive = np.array([log_mgf(spec, x) for x in lam])
    if spec.is_symmetric:
        return positive
    negative = np.array([log_mgf(spec, -x) for x in lam])
    return np.maximum(positive, negative)


@profile
def bphi_norm(spec: RVSpec, phi: YoungFunction) -> float:
    """
    Smallest tau with E exp(lambda xi) <= exp(phi(lambda tau)) for 0 < |lambda| < lambda0, found by bisection
    on tau over a log-spaced lambda grid.
    :return: tau, or math.inf if no finite tau exists on the grid
    """
    lam_hi = min(phi.lambda0 * (1 - numerics.bphi_lambda0_shrink), numerics.bphi_lambda_max)
    lam = np.geomspace(numerics.bphi_lambda_min, lam_hi, numerics.bphi_lambda_points)
    envelope = _bphi_log_mgf_envelope(spec, lam)
    if not np.all(np.isfinite(envelope)):
        return math.inf
    slack = 1e-12 * np.maximum(1.0, np.abs(envelope))

    def holds(tau: float) -> bool:
        return bool(np.all(np.asarray(phi(lam * tau)) >= envelope - slack))

    hi = 1.0
    while not holds(hi):
        hi *= 2
        if hi > numerics.bphi_tau_cap:
            get_middleware().logdebug(f'no finite {phi.label} norm for {spec.label} below tau={numerics.bphi_tau_cap:g}')
            return math.inf
    for _ in range(1100):
        if not holds(hi / 2):
            break
        hi /= 2
    else:
        return 0.0
    lo = hi / 2
    while hi - lo > numerics.bphi_rel_tol * hi:
        mid = 0.5 * (lo + hi)
        if holds(mid):
            hi = mid
        else:
            lo = mid
    margin = np.asarray(phi(lam * hi)) - envelope
    binding_only_at_cap = margin[-1] <= 1e-6 * max(1.0, abs(envelope[-1])) \
        and np.all(margin[:-1] > 1e-6 * np.maximum(1.0, np.abs(envelope[:-1])))
    if binding_only_at_cap and lam_hi == numerics.bphi_lambda_max:
        get_middleware().logwarn(f'{phi.label} norm of {spec.label} is binding at the lambda cap '
                                 f'{lam_hi:g}; membership is not certified beyond it')
    return hi


def space_norm(spec: RVSpec, space: SpaceDescriptor) -> float:
    if isinstance(space, LpSpace):
        return lp_norm(spec, space.p)
    if isinstance(space, GLSSpace):
        return gls_norm(spec, space.psi)
    return bphi_norm(spec, space.phi)


# %% tails
def tail_characteristic(space: SpaceDescriptor, t: float) -> float:
    """
    Bound on P(|zeta| >= t) that holds for every zeta with unit norm in the space.
    """
    if isinstance(space, LpSpace):
        if t <= 0:
            return 1.0
        return min(1.0, t ** (-space.p))
    if isinstance(space, GLSSpace):
        if t < math.e:
            return 1.0
        return min(1.0, math.exp(-h_star(space.psi, math.log(t))))
    if t <= 0:
        return 1.0
    return min(1.0, math.exp(-nu_transform(space.phi, t)))


def relative_tail_bound(space: SpaceDescriptor, norm: float, t: float) -> float:
    """
    P(|zeta| >= t) <= T^X(t / ||zeta||_X).
    """
    if norm < 0 or math.isnan(norm):
        raise InvalidParameterException(f'norm must be non-negative, got {norm}')
    if norm == math.inf:
        return 1.0
    if norm == 0:
        return 0.0 if t > 0 else 1.0
    return tail_characteristic(space, t / norm)


def one_sided_bphi_tail(phi: YoungFunction, norm: float, x: float) -> float:
    """
    P(zeta >= x) <= exp(-nu(x / ||zeta||)) for x > 0.
    """
    if norm == 0:
        return 0.0
    return min(1.0, math.exp(-nu_transform(phi, x / norm)))


def factor_two_diagnostic(spec: RVSpec, phi: YoungFunction, t_grid: Sequence[float]) -> pd.DataFrame:
    """
    Compares one- and two-sided tails of xi with exp(-nu(t / ||xi||)). The two-sided tail may exceed it by
    up to a factor 2; rows where that happens are flagged and logged, not treated as errors.
    """
    norm = bphi_norm(spec, phi)
    rows = []
    for t in t_grid:
        bound = one_sided_bphi_tail(phi, norm, t) if t > 0 else 1.0
        rows.append({'t': t,
                     'one_sided': upper_tail(spec, t),
                     'two_sided': tail(spec, t),
                     'bound': bound})
    df = pd.DataFrame(rows)
    df['one_sided_ok'] = df['one_sided'] <= df['bound'] + 1e-12
    df['two_sided_exceeds'] = df['two_sided'] > df['bound'] + 1e-12
    flagged = df[df['two_sided_exceeds']]
    if len(flagged) > 0:
        get_middleware().logwarn(f'two-sided tail of {spec.label} exceeds exp(-nu) at t in '
                                 f'{list(np.round(flagged["t"].to_numpy(), 6))}; the factor 2 is needed there')
    return df


def two_point_sharpness(p: float, t: float) -> Tuple[float, float]:
    """
    The two-point law taking t with probability t^-p has unit L_p norm and P(|nu| >= t) = t^-p,
    so the L_p tail characteristic is attained.
    :return: (||nu||_p, P(|nu| >= t))
    """
    if not p > 1 or not t > 1:
        raise InvalidParameterException(f'need p > 1 and t > 1, got p={p}, t={t}')
    nu = RVSpec.two_point_sharp(t, p)
    return lp_norm(nu, p), tail(nu, t)


def rosenthal_factor(p: float) -> float:
    return rosenthal_c_r * p / math.log(p)


def rosenthal_constant(p: float) -> float:
    """
    K(L_p) = C_R p / ln p for p > 2.
    """
    if not p > 2:
        raise InvalidParameterException(f'Rosenthal constant needs p > 2, got {p}')
    return rosenthal_factor(p)


def is_phi_conv(phi: YoungFunction) -> bool:
    """
    Checks convexity of mu -> phi(sqrt(mu)) by second differences on a uniform grid.
    Inconclusive evidence is reported as False.
    """
    lam_max = min(phi.lambda0 * (1 - numerics.bphi_lambda0_shrink), numerics.phi_conv_lambda_cap)
    mu = np.linspace(0, lam_max ** 2, numerics.phi_conv_points)
    values = np.asarray(phi(np.sqrt(mu)), dtype=float)
    if not np.all(np.isfinite(values)):
        get_middleware().logdebug(f'{phi.label} is not finite on the convexity grid')
        return False
    second = values[2:] - 2 * values[1:-1] + values[:-2]
    tolerance = 1e-10 * np.maximum(1.0, np.abs(values[1:-1]))
    worst = int(np.argmin(second + tolerance))
    if second[worst] < -tolerance[worst]:
        get_middleware().logdebug(f'{phi.label}: phi(sqrt(mu)) is not convex near mu={mu[worst + 1]:.6g}, '
                                  f'second difference {second[worst]:.3g}')
        return False
    return True
