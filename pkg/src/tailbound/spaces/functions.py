from __future__ import annotations

import abc
import math
from abc import ABC
from typing import Tuple, Dict, Any, Optional, Type, Union, Sequence

import numpy as np

from tailbound.data_types.exceptions import InvalidParameterException, UnknownCatalogEntryException
from tailbound.utils.utils import get_all_classes_in_module, float_to_json, float_from_json

ArrayLike = Union[float, np.ndarray]


def _as_output(x: np.ndarray) -> ArrayLike:
    if np.ndim(x) == 0:
        return float(x)
    return x


# %% generating functions psi on [1, b)
class GeneratingFunction(ABC):
    name: str
    b: float = math.inf
    label: str = ''

    def __call__(self, p: float) -> float:
        lo, hi = self.support()
        if p < lo or p > hi:
            return math.inf
        if p == hi and not self._closed_at_b():
            return math.inf
        return self._value(p)

    @abc.abstractmethod
    def _value(self, p: float) -> float: ...

    @abc.abstractmethod
    def to_json(self) -> Dict[str, Any]: ...

    def _closed_at_b(self) -> bool:
        return False

    def support(self) -> Tuple[float, float]:
        return 1.0, self.b

    def validate(self, samples: int = 200):
        """
        Checks on a sample grid that psi is finite somewhere and bounded away from 0.
        """
        lo, hi = self.support()
        if lo == hi:
            grid = np.array([lo])
        else:
            grid = np.geomspace(lo, hi, samples + 1)[:-1] if math.isfinite(hi) else np.geomspace(lo, 1e3, samples)
        values = np.array([self(p) for p in grid])
        finite = values[np.isfinite(values)]
        if len(finite) == 0:
            raise InvalidParameterException(f'{self.label} is +inf on its whole domain')
        if np.min(finite) <= 0:
            raise InvalidParameterException(f'{self.label} must be bounded away from 0, min is {np.min(finite)}')

    def __repr__(self):
        return self.label


class PowerPsi(GeneratingFunction):
    """
    psi(p) = p^exponent; exponent 1/m gives the generating function of tails exp(-t^m).
    """
    name = 'power'

    def __init__(self, exponent: float, b: Optional[float] = None):
        self.exponent = float(exponent)
        self.b = math.inf if b is None else float(b)
        if self.b <= 1:
            raise InvalidParameterException(f'psi domain needs b > 1, got {self.b}')
        if self.exponent < 0 and self.b == math.inf:
            raise InvalidParameterException('a decreasing power on [1, inf) is not bounded away from 0')
        self.label = f'p^{self.exponent:g}' + (f' on [1,{self.b:g})' if math.isfinite(self.b) else '')

    def _value(self, p: float) -> float:
        return p ** self.exponent

    def to_json(self) -> Dict[str, Any]:
        return {'name': self.name, 'exponent': self.exponent, 'b': None if self.b == math.inf else self.b}


class ConstantPsi(GeneratingFunction):
    name = 'constant'

    def __init__(self, value: float = 1.0, b: Optional[float] = None):
        self.value = float(value)
        self.b = math.inf if b is None else float(b)
        if self.value <= 0:
            raise InvalidParameterException(f'constant psi must be positive, got {self.value}')
        self.label = f'{self.value:g}'

    def _value(self, p: float) -> float:
        return self.value

    def to_json(self) -> Dict[str, Any]:
        return {'name': self.name, 'value': self.value, 'b': None if self.b == math.inf else self.b}


class PolePsi(GeneratingFunction):
    """
    psi(p) = (b - p)^(-beta) on [1, b).
    """
    name = 'pole'

    def __init__(self, b: float, beta: float):
        self.b = float(b)
        self.beta = float(beta)
        if not 1 < self.b < math.inf or self.beta <= 0:
            raise InvalidParameterException(f'pole psi needs 1 < b < inf and beta > 0, got b={b}, beta={beta}')
        self.label = f'({self.b:g}-p)^-{self.beta:g}'

    def _value(self, p: float) -> float:
        return (self.b - p) ** (-self.beta)

    def to_json(self) -> Dict[str, Any]:
        return {'name': self.name, 'b': self.b, 'beta': self.beta}


class ExtremalPsi(GeneratingFunction):
    """
    psi^(r): 1 at p = r and +inf elsewhere; the generating space collapses to L_r.
    """
    name = 'extremal'

    def __init__(self, r: float):
        self.r = float(r)
        if self.r < 1:
            raise InvalidParameterException(f'extremal psi needs r >= 1, got {r}')
        self.b = self.r
        self.label = f'psi^({self.r:g})'

    def __call__(self, p: float) -> float:
        return 1.0 if p == self.r else math.inf

    def _value(self, p: float) -> float:
        return 1.0

    def support(self) -> Tuple[float, float]:
        return self.r, self.r

    def to_json(self) -> Dict[str, Any]:
        return {'name': self.name, 'r': self.r}


class TabulatedPsi(GeneratingFunction):
    """
    psi known on a grid, interpolated linearly in (ln p, ln psi). +inf outside the table.
    """
    name = 'tabulated'

    def __init__(self, p: Sequence[float], values: Sequence[float], label: str = 'tabulated'):
        self.p = np.asarray(p, dtype=float)
        self.values = np.asarray(values, dtype=float)
        if self.p.ndim != 1 or self.p.shape != self.values.shape or len(self.p) < 2:
            raise InvalidParameterException('tabulated psi needs matching grids of at least two points')
        if np.any(np.diff(self.p) <= 0) or self.p[0] < 1:
            raise InvalidParameterException('tabulated psi needs a strictly increasing grid starting at p >= 1')
        finite = np.isfinite(self.values)
        if not finite.all():
            # keep the finite prefix, the domain is an interval
            end = int(np.argmin(finite))
            if end < 2:
                raise InvalidParameterException('tabulated psi needs at least two finite leading values')
            self.p, self.values = self.p[:end], self.values[:end]
        self.b = float(self.p[-1])
        self._log_p = np.log(self.p)
        self._log_values = np.log(self.values)
        self.label = label

    def _closed_at_b(self) -> bool:
        return True

    def support(self) -> Tuple[float, float]:
        return float(self.p[0]), float(self.p[-1])

    def _value(self, p: float) -> float:
        return float(np.exp(np.interp(math.log(p), self._log_p, self._log_values)))

    def to_json(self) -> Dict[str, Any]:
        return {'name': self.name, 'p': [float_to_json(x) for x in self.p],
                'values': [float_to_json(x) for x in self.values], 'label': self.label}


# %% slowly varying functions
class SlowlyVarying(ABC):
    name: str

    @abc.abstractmethod
    def __call__(self, lam: ArrayLike) -> ArrayLike: ...

    @abc.abstractmethod
    def to_json(self) -> Dict[str, Any]: ...


class ConstantL(SlowlyVarying):
    name = 'constant'

    def __init__(self, c: float = 1.0):
        if c <= 0:
            raise InvalidParameterException(f'slowly varying constant must be positive, got {c}')
        self.c = float(c)

    def __call__(self, lam: ArrayLike) -> ArrayLike:
        return _as_output(np.full(np.shape(lam), self.c))

    def to_json(self) -> Dict[str, Any]:
        return {'name': self.name, 'c': self.c}


class LogL(SlowlyVarying):
    """
    L(lambda) = 1 + ln(lambda) on lambda >= 1.
    """
    name = 'log'

    def __call__(self, lam: ArrayLike) -> ArrayLike:
        return _as_output(1 + np.log(np.maximum(np.asarray(lam, dtype=float), 1.0)))

    def to_json(self) -> Dict[str, Any]:
        return {'name': self.name}


# %% Young functions
class YoungFunction(ABC):
    """
    Even convex phi on (-lambda0, lambda0) with phi(0) = 0 and 0 < phi''(0) < inf.
    Evaluates to +inf outside the domain.
    """
    name: str
    lambda0: float = math.inf
    label: str = ''

    def __call__(self, lam: ArrayLike) -> ArrayLike:
        a = np.abs(np.asarray(lam, dtype=float))
        with np.errstate(over='ignore', invalid='ignore'):
            values = np.where(a < self.lambda0, self._value(a), np.inf)
        return _as_output(values)

    @abc.abstractmethod
    def _value(self, a: np.ndarray) -> np.ndarray: ...

    @abc.abstractmethod
    def to_json(self) -> Dict[str, Any]: ...

    def _lambda0_json(self):
        return None if self.lambda0 == math.inf else self.lambda0

    def validate(self, samples: int = 401):
        if float(self(0.0)) != 0:
            raise InvalidParameterException(f'{self.label}: phi(0) must be 0')
        upper = min(self.lambda0 * (1 - 1e-6), 10.0)
        grid = np.linspace(-upper, upper, samples)
        values = np.asarray(self(grid))
        off_zero = values[grid != 0]
        if np.any(off_zero <= 0):
            raise InvalidParameterException(f'{self.label}: phi must be positive off 0')
        if not np.allclose(values, values[::-1], rtol=1e-12, atol=0):
            raise InvalidParameterException(f'{self.label}: phi must be even')
        second = values[2:] - 2 * values[1:-1] + values[:-2]
        if np.any(second < -1e-10 * np.maximum(1.0, np.abs(values[1:-1]))):
            raise InvalidParameterException(f'{self.label}: phi must be convex')
        h = min(1e-4, upper / 2)
        curvature = 2 * float(self(h)) / h ** 2
        if not 0 < curvature < math.inf:
            raise InvalidParameterException(f'{self.label}: phi\'\'(0) must be finite and positive, got {curvature}')

    def __repr__(self):
        return self.label


def _lambda0(lambda0: Optional[float]) -> float:
    value = math.inf if lambda0 is None else float(lambda0)
    if value <= 0:
        raise InvalidParameterException(f'lambda0 must be positive, got {lambda0}')
    return value


def _piecewise_power(a: np.ndarray, m: float, L: SlowlyVarying) -> np.ndarray:
    """
    a^2 / 2 on [0, 1], a^m L(a) / m + 1/2 - L(1)/m beyond; continuous at 1 and C^1 when L is constant.
    """
    outer = np.power(np.maximum(a, 1.0), m) * np.asarray(L(np.maximum(a, 1.0))) / m + 0.5 - float(L(1.0)) / m
    return np.where(a <= 1, 0.5 * a * a, outer)


class QuadraticPhi(YoungFunction):
    """
    phi_2(lambda) = lambda^2 / 2; B(phi_2) is the sub-Gaussian space.
    """
    name = 'quadratic'

    def __init__(self, lambda0: Optional[float] = None):
        self.lambda0 = _lambda0(lambda0)
        self.label = 'phi_2' + (f'|{self.lambda0:g}' if math.isfinite(self.lambda0) else '')

    def _value(self, a: np.ndarray) -> np.ndarray:
        return 0.5 * a * a

    def to_json(self) -> Dict[str, Any]:
        return {'name': self.name, 'lambda0': self._lambda0_json()}


class MLPhi(YoungFunction):
    name = 'm_L'

    def __init__(self, m: float, L: Optional[SlowlyVarying] = None, lambda0: Optional[float] = None):
        self.m = float(m)
        if self.m < 2:
            raise InvalidParameterException(f'phi_(m,L) needs m >= 2, got {m}')
        self.L = ConstantL() if L is None else L
        self.lambda0 = _lambda0(lambda0)
        self.label = f'phi_({self.m:g},{self.L.name})'

    def _value(self, a: np.ndarray) -> np.ndarray:
        return _piecewise_power(a, self.m, self.L)

    def to_json(self) -> Dict[str, Any]:
        return {'name': self.name, 'm': self.m, 'L': self.L.to_json(), 'lambda0': self._lambda0_json()}


class SubQuadraticPhi(YoungFunction):
    """
    Quadratic near 0 and |lambda|^q / q beyond 1 with 1 < q < 2: a Young function for which
    lambda -> phi(sqrt(lambda)) is concave past 1.
    """
    name = 'sub_quadratic'

    def __init__(self, q: float = 1.6, lambda0: Optional[float] = None):
        self.q = float(q)
        if not 1 < self.q < 2:
            raise InvalidParameterException(f'sub_quadratic phi needs 1 < q < 2, got {q}')
        self.lambda0 = _lambda0(lambda0)
        self.L = ConstantL()
        self.label = f'phi_sub({self.q:g})'

    def _value(self, a: np.ndarray) -> np.ndarray:
        return _piecewise_power(a, self.q, self.L)

    def to_json(self) -> Dict[str, Any]:
        return {'name': self.name, 'q': self.q, 'lambda0': self._lambda0_json()}


# %% catalog lookup
def _catalog(parent: Type) -> Dict[str, Type]:
    classes = get_all_classes_in_module(__name__, parent)
    return {cls.name: cls for cls in classes.values() if 'name' in cls.__dict__}


def _lookup(parent: Type, kind: str, data: Dict[str, Any]) -> Type:
    name = data.get('name')
    catalog = _catalog(parent)
    if name not in catalog:
        raise UnknownCatalogEntryException(f'unknown {kind} {name!r}, known: {sorted(catalog)}')
    return catalog[name]


def slowly_varying_from_json(data: Optional[Dict[str, Any]]) -> SlowlyVarying:
    if data is None:
        return ConstantL()
    cls = _lookup(SlowlyVarying, 'slowly varying function', data)
    if cls is ConstantL:
        return ConstantL(data.get('c', 1.0))
    return cls()


def psi_from_json(data: Dict[str, Any]) -> GeneratingFunction:
    cls = _lookup(GeneratingFunction, 'generating function', data)
    try:
        if cls is PowerPsi:
            psi = PowerPsi(data['exponent'], data.get('b'))
        elif cls is ConstantPsi:
            psi = ConstantPsi(data.get('value', 1.0), data.get('b'))
        elif cls is PolePsi:
            psi = PolePsi(data['b'], data['beta'])
        elif cls is ExtremalPsi:
            psi = ExtremalPsi(data['r'])
        else:
            psi = TabulatedPsi([float_from_json(x) for x in data['p']],
                               [float_from_json(x) for x in data['values']], data.get('label', 'tabulated'))
    except KeyError as e:
        raise InvalidParameterException(f'generating function {data.get("name")!r} misses parameter {e}')
    psi.validate()
    return psi


def phi_from_json(data: Dict[str, Any]) -> YoungFunction:
    cls = _lookup(YoungFunction, 'Young function', data)
    try:
        if cls is QuadraticPhi:
            phi = QuadraticPhi(data.get('lambda0'))
        elif cls is MLPhi:
            phi = MLPhi(data['m'], slowly_varying_from_json(data.get('L')), data.get('lambda0'))
        else:
            phi = SubQuadraticPhi(data.get('q', 1.6), data.get('lambda0'))
    except KeyError as e:
        raise InvalidParameterException(f'Young function {data.get("name")!r} misses parameter {e}')
    phi.validate()
    return phi
