from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Dict, Any, List, Sequence, NamedTuple, Optional, Union

import numpy as np
from line_profiler import profile
from scipy import integrate, special, stats

from tailbound.configs.numerics_config import numerics
from tailbound.data_types.data_types import RVKind
from tailbound.data_types.exceptions import InvalidParameterException, NotCenteredException, \
    NumericalFailureException

_log_sqrt_pi = 0.5 * math.log(math.pi)


@dataclass(frozen=True)
class RVSpec:
    """
    A law from the catalog. Use the classmethod constructors instead of filling params by hand.
    Every kind except TWO_POINT_SHARP is centered.
    """
    kind: RVKind
    params: Dict[str, Any] = field(default_factory=dict)
    label: str = ''

    def __post_init__(self):
        _validate(self)
        if not self.label:
            object.__setattr__(self, 'label', _default_label(self))

    # %% constructors
    @classmethod
    def rademacher(cls, scale: float = 1.0, label: str = '') -> RVSpec:
        return cls(RVKind.RADEMACHER, {'scale': float(scale)}, label)

    @classmethod
    def gaussian(cls, sigma: float = 1.0, label: str = '') -> RVSpec:
        return cls(RVKind.GAUSSIAN, {'sigma': float(sigma)}, label)

    @classmethod
    def uniform(cls, half_width: float = 1.0, label: str = '') -> RVSpec:
        return cls(RVKind.UNIFORM, {'half_width': float(half_width)}, label)

    @classmethod
    def two_point_sharp(cls, t: float, p: float, label: str = '') -> RVSpec:
        return cls(RVKind.TWO_POINT_SHARP, {'t': float(t), 'p': float(p)}, label)

    @classmethod
    def weibull_sym(cls, m: float, scale: float = 1.0, label: str = '') -> RVSpec:
        return cls(RVKind.WEIBULL_SYM, {'m': float(m), 'scale': float(scale)}, label)

    @classmethod
    def bounded(cls, values: Sequence[float], probs: Sequence[float], label: str = '') -> RVSpec:
        return cls(RVKind.BOUNDED, {'values': tuple(float(v) for v in values),
                                    'probs': tuple(float(p) for p in probs)}, label)

    # %% properties
    @property
    def is_centered(self) -> bool:
        return self.kind != RVKind.TWO_POINT_SHARP

    @property
    def is_symmetric(self) -> bool:
        if self.kind == RVKind.BOUNDED:
            values = np.asarray(self.params["values"])
            order = np.argsort(values)
            values = values[order]
            probs = np.asarray(self.params["probs"])[order]
            return bool(np.allclose(values, -values[::-1]) and np.allclose(probs, probs[::-1]))
        return self.kind != RVKind.TWO_POINT_SHARP

    @property
    def is_bounded(self) -> bool:
        return self.kind in (RVKind.RADEMACHER, RVKind.UNIFORM, RVKind.TWO_POINT_SHARP, RVKind.BOUNDED)

    @property
    def support_bound(self) -> float:
        """
        Largest |x| with P(|xi| >= x) > tail_cutoff.
        """
        if self.kind == RVKind.RADEMACHER:
            return self.params['scale']
        if self.kind == RVKind.GAUSSIAN:
            return self.params['sigma'] * float(stats.norm.isf(numerics.tail_cutoff / 2))
        if self.kind == RVKind.UNIFORM:
            return self.params['half_width']
        if self.kind == RVKind.TWO_POINT_SHARP:
            return self.params['t']
        if self.kind == RVKind.WEIBULL_SYM:
            return self.params['scale'] * (-math.log(numerics.tail_cutoff)) ** (1 / self.params['m'])
        return float(np.max(np.abs(self.params['values'])))

    def scaled(self, c: float) -> RVSpec:
        """
        Law of c * xi, obtained by rescaling parameters.
        """
        if c == 0:
            raise InvalidParameterException('cannot scale a random variable by 0')
        a = abs(c)
        label = f'{c:g}*{self.label}'
        if self.kind == RVKind.RADEMACHER:
            return RVSpec.rademacher(self.params['scale'] * a, label)
        if self.kind == RVKind.GAUSSIAN:
            return RVSpec.gaussian(self.params['sigma'] * a, label)
        if self.kind == RVKind.UNIFORM:
            return RVSpec.uniform(self.params['half_width'] * a, label)
        if self.kind == RVKind.WEIBULL_SYM:
            return RVSpec.weibull_sym(self.params['m'], self.params['scale'] * a, label)
        if self.kind == RVKind.TWO_POINT_SHARP:
            raise NotCenteredException(f"{self.label}: two_point_sharp has no scaled member in the catalog")
        return RVSpec.bounded([c * v for v in self.params['values']], self.params['probs'], label)

    def standardized(self) -> RVSpec:
        """
        Law of xi / sigma. Parametric kinds land exactly on their unit-variance member, so the result
        does not depend on the scale of the input.
        """
        label = f'{self.label}/sigma'
        if self.kind == RVKind.RADEMACHER:
            return RVSpec.rademacher(1.0, label)
        if self.kind == RVKind.GAUSSIAN:
            return RVSpec.gaussian(1.0, label)
        if self.kind == RVKind.UNIFORM:
            return RVSpec.uniform(math.sqrt(3.0), label)
        if self.kind == RVKind.WEIBULL_SYM:
            m = self.params['m']
            return RVSpec.weibull_sym(m, math.exp(-0.5 * special.gammaln(1 + 2 / m)), label)
        if self.kind == RVKind.TWO_POINT_SHARP:
            raise NotCenteredException(f'{self.label} is not centered')
        return self.scaled(1 / math.sqrt(variance(self)))

    def to_json(self) -> Dict[str, Any]:
        params = {k: list(v) if isinstance(v, tuple) else v for k, v in self.params.items()}
        return {'kind': self.kind.value, 'params': params, 'label': self.label}


def _default_label(spec: RVSpec) -> str:
    if spec.kind == RVKind.BOUNDED:
        return 'bounded'
    args = ','.join(f'{k}={v:g}' for k, v in spec.params.items())
    return f'{spec.kind.value}({args})'


def _positive(spec: RVSpec, name: str):
    value = spec.params.get(name)
    if value is None or not math.isfinite(value) or value <= 0:
        raise InvalidParameterException(f'{spec.kind.value}: parameter {name} must be positive and finite, '
                                        f'got {value}')


def _validate(spec: RVSpec):
    kind = spec.kind
    if kind in (RVKind.RADEMACHER,):
        _positive(spec, 'scale')
    elif kind == RVKind.GAUSSIAN:
        _positive(spec, 'sigma')
    elif kind == RVKind.UNIFORM:
        _positive(spec, 'half_width')
    elif kind == RVKind.TWO_POINT_SHARP:
        _positive(spec, 't')
        _positive(spec, 'p')
        if spec.params['t'] <= 1:
            raise InvalidParameterException(f'two_point_sharp requires t > 1, got {spec.params["t"]}')
    elif kind == RVKind.WEIBULL_SYM:
        _positive(spec, 'scale')
        if not spec.params.get('m', 0) > 1:
            raise InvalidParameterException(f'weibull_sym requires m > 1, got {spec.params.get("m")}')
    elif kind == RVKind.BOUNDED:
        values = np.asarray(spec.params.get('values', ()), dtype=float)
        probs = np.asarray(spec.params.get('probs', ()), dtype=float)
        if len(values) == 0 or values.shape != probs.shape:
            raise InvalidParameterException('bounded: values and probs must be non-empty and of equal length')
        if not np.all(np.isfinite(values)):
            raise InvalidParameterException('bounded: values must be finite')
        if np.any(probs < 0) or abs(probs.sum() - 1) > 1e-12:
            raise InvalidParameterException(f'bounded: probs must lie on the simplex, sum is {probs.sum()}')
        mean = float(np.dot(values, probs))
        if abs(mean) > 1e-12 * max(1.0, float(np.max(np.abs(values)))):
            raise InvalidParameterException(f'bounded: law must be centered, mean is {mean}')
    else:
        raise InvalidParameterException(f'unknown kind {kind}')


# %% moments
def log_abs_moment(spec: RVSpec, p: float) -> float:
    """
    ln E|xi|^p in closed form.
    """
    if p <= 0:
        raise InvalidParameterException(f'moment order must be positive, got {p}')
    kind = spec.kind
    if kind == RVKind.RADEMACHER:
        return p * math.log(spec.params['scale'])
    if kind == RVKind.GAUSSIAN:
        return (p * math.log(spec.params['sigma']) + 0.5 * p * math.log(2)
                + special.gammaln((p + 1) / 2) - _log_sqrt_pi)
    if kind == RVKind.UNIFORM:
        return p * math.log(spec.params['half_width']) - math.log(p + 1)
    if kind == RVKind.WEIBULL_SYM:
        return p * math.log(spec.params['scale']) + special.gammaln(1 + p / spec.params['m'])
    if kind == RVKind.TWO_POINT_SHARP:
        t, p0 = spec.params['t'], spec.params['p']
        return p * math.log(t) - p0 * math.log(t)
    values = np.abs(np.asarray(spec.params['values']))
    probs = np.asarray(spec.params['probs'])
    mask = (values > 0) & (probs > 0)
    if not np.any(mask):
        return -math.inf
    return float(special.logsumexp(p * np.log(values[mask]), b=probs[mask]))


def abs_moment(spec: RVSpec, p: float) -> float:
    return math.exp(log_abs_moment(spec, p))


def tail(spec: RVSpec, t: float) -> float:
    """
    P(|xi| >= t).
    """
    if t <= 0:
        return 1.0
    kind = spec.kind
    if kind == RVKind.RADEMACHER:
        return 1.0 if t <= spec.params['scale'] else 0.0
    if kind == RVKind.GAUSSIAN:
        return float(2 * stats.norm.sf(t / spec.params['sigma']))
    if kind == RVKind.UNIFORM:
        return max(0.0, 1 - t / spec.params['half_width'])
    if kind == RVKind.WEIBULL_SYM:
        return math.exp(-(t / spec.params['scale']) ** spec.params['m'])
    if kind == RVKind.TWO_POINT_SHARP:
        t0 = spec.params['t']
        return t0 ** (-spec.params['p']) if t <= t0 else 0.0
    values = np.abs(np.asarray(spec.params['values']))
    probs = np.asarray(spec.params['probs'])
    return float(np.sum(probs[values >= t]))


def upper_tail(spec: RVSpec, t: float) -> float:
    """
    P(xi >= t), the one-sided tail.
    """
    kind = spec.kind
    if kind == RVKind.BOUNDED:
        values = np.asarray(spec.params['values'])
        return float(np.sum(np.asarray(spec.params['probs'])[values >= t]))
    if kind == RVKind.TWO_POINT_SHARP:
        return tail(spec, t)
    if kind == RVKind.RADEMACHER:
        s = spec.params["scale"]
        return 1.0 if t <= -s else (0.5 if t <= s else 0.0)
    if t > 0:
        return 0.5 * tail(spec, t)
    # continuous symmetric laws
    return 1 - 0.5 * tail(spec, -t) if t < 0 else 0.5


def _atoms(spec: RVSpec) -> List[float]:
    if spec.kind == RVKind.RADEMACHER:
        return [spec.params['scale']]
    if spec.kind == RVKind.TWO_POINT_SHARP:
        return [spec.params['t']]
    if spec.kind == RVKind.BOUNDED:
        return sorted({abs(v) for v in spec.params['values'] if v != 0})
    return []


@profile
def abs_moment_quadrature(spec: RVSpec, p: float) -> float:
    """
    E|xi|^p = int_0^inf p t^(p-1) P(|xi| > t) dt by adaptive quadrature, truncated where the tail
    falls below the configured cutoff.
    """
    if p <= 0:
        raise InvalidParameterException(f'moment order must be positive, got {p}')
    upper = spec.support_bound
    atoms = [a for a in _atoms(spec) if 0 < a < upper]

    def integrand(t: float) -> float:
        if t <= 0:
            return 0.0
        # the open tail P(|xi| > t) differs from tail() only on atoms, a null set
        return p * t ** (p - 1) * min(1.0, tail(spec, t))

    value, _ = integrate.quad(integrand, 0, upper, points=atoms or None,
                              epsabs=numerics.quad_epsabs, epsrel=numerics.quad_epsrel, limit=numerics.quad_limit)
    if not math.isfinite(value):
        raise NumericalFailureException(f'quadrature for E|{spec.label}|^{p} did not converge')
    return value


def variance(spec: RVSpec) -> float:
    kind = spec.kind
    if kind == RVKind.TWO_POINT_SHARP:
        raise NotCenteredException(f'{spec.label} is not centered, variance is not defined for sums')
    if kind == RVKind.RADEMACHER:
        return spec.params['scale'] ** 2
    if kind == RVKind.GAUSSIAN:
        return spec.params['sigma'] ** 2
    if kind == RVKind.UNIFORM:
        return spec.params['half_width'] ** 2 / 3
    if kind == RVKind.WEIBULL_SYM:
        return spec.params['scale'] ** 2 * math.exp(special.gammaln(1 + 2 / spec.params['m']))
    values = np.asarray(spec.params['values'])
    return float(np.dot(np.asarray(spec.params['probs']), values ** 2))


# %% moment generating functions
def _log_cosh(a: float) -> float:
    a = abs(a)
    return a + math.log1p(math.exp(-2 * a)) - math.log(2)


def _log_sinhc(a: float) -> float:
    """
    ln(sinh(a) / a)
    """
    a = abs(a)
    if a < 1e-3:
        a2 = a * a
        return a2 / 6 - a2 * a2 / 180
    return a + math.log1p(-math.exp(-2 * a)) - math.log(2) - math.log(a)


def _weibull_log_mgf(m: float, scale: float, lam: float) -> float:
    """
    ln E cosh(lam * s * W), W >= 0 with density m w^(m-1) exp(-w^m), evaluated around the peak of
    lam * s * w - w^m so that large lam does not overflow.
    """
    a = abs(lam) * scale
    peak = (a / m) ** (1 / (m - 1))
    shift = a * peak - peak ** m

    def exponent(w: float) -> float:
        return a * w - w ** m - shift

    upper = max(2 * peak, 1.0)
    while exponent(upper) > -60:
        upper *= 2

    def plus(w: float) -> float:
        if w <= 0:
            return 0.0
        return math.exp(exponent(w)) * m * w ** (m - 1)

    def minus(w: float) -> float:
        if w <= 0:
            return 0.0
        return math.exp(-a * w - w ** m - shift) * m * w ** (m - 1)

    kw = dict(epsabs=0.0, epsrel=numerics.quad_epsrel, limit=numerics.quad_limit)
    points = [peak] if 0 < peak < upper else None
    i_plus, _ = integrate.quad(plus, 0, upper, points=points, **kw)
    i_minus, _ = integrate.quad(minus, 0, upper, **kw)
    total = 0.5 * (i_plus + i_minus)
    if not total > 0 or not math.isfinite(total):
        raise NumericalFailureException(f'mgf quadrature failed for weibull_sym(m={m}) at lambda={lam}')
    return shift + math.log(total)


@profile
def log_mgf(spec: RVSpec, lam: float) -> float:
    """
    ln E exp(lam * xi). Every catalog law has a finite mgf on the whole real line.
    """
    if lam == 0:
        return 0.0
    kind = spec.kind
    if kind == RVKind.RADEMACHER:
        return _log_cosh(lam * spec.params['scale'])
    if kind == RVKind.GAUSSIAN:
        return 0.5 * (spec.params['sigma'] * lam) ** 2
    if kind == RVKind.UNIFORM:
        return _log_sinhc(lam * spec.params['half_width'])
    if kind == RVKind.WEIBULL_SYM:
        return _weibull_log_mgf(spec.params['m'], spec.params['scale'], lam)
    if kind == RVKind.TWO_POINT_SHARP:
        t, p = spec.params['t'], spec.params['p']
        w = t ** (-p)
        return float(special.logsumexp([0.0, lam * t], b=[1 - w, w]))
    values = np.asarray(spec.params['values'])
    return float(special.logsumexp(lam * values, b=np.asarray(spec.params['probs'])))


def mgf(spec: RVSpec, lam: float) -> float:
    if lam == 0:
        return 1.0
    with np.errstate(over='ignore'):
        return float(np.exp(log_mgf(spec, lam)))


# %% sampling
def make_rng(seed: int, stream: int = 0) -> np.random.Generator:
    """
    Counter-based generator for the substream (seed, stream).
    """
    entropy = [int(seed) & 0xFFFFFFFFFFFFFFFF, int(stream)]
    return np.random.Generator(np.random.Philox(np.random.SeedSequence(entropy)))


def draw(spec: RVSpec, count: Union[int, tuple], rng: np.random.Generator) -> np.ndarray:
    kind = spec.kind
    if kind == RVKind.RADEMACHER:
        return spec.params['scale'] * (2.0 * rng.integers(0, 2, size=count) - 1.0)
    if kind == RVKind.GAUSSIAN:
        return spec.params['sigma'] * rng.standard_normal(size=count)
    if kind == RVKind.UNIFORM:
        h = spec.params['half_width']
        return rng.uniform(-h, h, size=count)
    if kind == RVKind.WEIBULL_SYM:
        m = spec.params['m']
        signs = 2.0 * rng.integers(0, 2, size=count) - 1.0
        u = rng.random(size=count)
        return signs * spec.params['scale'] * (-np.log1p(-u)) ** (1 / m)
    if kind == RVKind.TWO_POINT_SHARP:
        t, p = spec.params['t'], spec.params['p']
        return np.where(rng.random(size=count) < t ** (-p), t, 0.0)
    return rng.choice(np.asarray(spec.params['values']), size=count, p=np.asarray(spec.params['probs']))


def sample(spec: RVSpec, count: int, seed: int) -> np.ndarray:
    """
    count independent draws; identical (spec, count, seed) give identical arrays.
    """
    if count < 1:
        raise InvalidParameterException(f'count must be positive, got {count}')
    return draw(spec, count, make_rng(seed))


# %% Bernstein moment condition
class BernsteinCheck(NamedTuple):
    holds: bool
    member_index: Optional[int] = None
    m: Optional[int] = None


def check_bernstein_condition(specs: Sequence[RVSpec], nu: float, kappa_c: float, m_max: int) -> BernsteinCheck:
    """
    Checks E|xi_i|^m <= (nu / 2) m! kappa_c^(m-2) for m = 2..m_max in log space.
    :return: the first violation as (False, member index, m), or (True, None, None)
    """
    if nu <= 0 or kappa_c <= 0:
        raise InvalidParameterException(f'nu and kappa must be positive, got nu={nu}, kappa={kappa_c}')
    if m_max < 2:
        raise InvalidParameterException(f'm_max must be at least 2, got {m_max}')
    log_nu = math.log(nu)
    log_kappa = math.log(kappa_c)
    for m in range(2, m_max + 1):
        log_rhs = log_nu + special.gammaln(m + 1) + (m - 2) * log_kappa - math.log(2)
        for i, spec in enumerate(specs):
            if log_abs_moment(spec, m) > log_rhs + 1e-12 * max(1.0, abs(log_rhs)):
                return BernsteinCheck(False, i, m)
    return BernsteinCheck(True)


def spec_from_json(data: Dict[str, Any]) -> RVSpec:
    from tailbound.data_types.exceptions import UnknownCatalogEntryException
    try:
        kind = RVKind(data['kind'])
    except (KeyError, ValueError):
        raise UnknownCatalogEntryException(f'unknown random variable kind {data.get("kind")!r}')
    params = dict(data.get('params', {}))
    label = data.get('label', '')
    try:
        if kind == RVKind.RADEMACHER:
            return RVSpec.rademacher(params.get('scale', 1.0), label)
        if kind == RVKind.GAUSSIAN:
            return RVSpec.gaussian(params.get('sigma', 1.0), label)
        if kind == RVKind.UNIFORM:
            return RVSpec.uniform(params.get('half_width', 1.0), label)
        if kind == RVKind.TWO_POINT_SHARP:
            return RVSpec.two_point_sharp(params['t'], params['p'], label)
        if kind == RVKind.WEIBULL_SYM:
            return RVSpec.weibull_sym(params['m'], params.get('scale', 1.0), label)
        return RVSpec.bounded(params['values'], params['probs'], label)
    except KeyError as e:
        raise InvalidParameterException(f'{kind.value}: missing parameter {e}')
