from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Optional, Dict, Any, Callable, TypeVar

import numpy as np

from tailbound.bounds.sum_problem import SumProblem
from tailbound.data_types.data_types import Route
from tailbound.data_types.exceptions import ConfigException, TailBoundException
from tailbound.spaces.spaces import SpaceDescriptor, space_from_json

T = TypeVar('T')


def _field(name: str, parse: Callable[[], T]) -> T:
    """
    Runs a sub-parser and re-raises any validation problem with the name of the config field.
    """
    try:
        return parse()
    except ConfigException:
        raise
    except TailBoundException as e:
        raise ConfigException(e.msg, field=name) from e
    except (KeyError, TypeError, ValueError, AttributeError) as e:
        raise ConfigException(f'malformed value ({e})', field=name) from e


def _optional_int(value: Any) -> Optional[int]:
    return None if value is None else int(value)


def _optional_float(value: Any) -> Optional[float]:
    return None if value is None else float(value)


def _section(data: Dict[str, Any], name: str) -> Dict[str, Any]:
    section = data.get(name, {})
    if not isinstance(section, dict):
        raise ConfigException(f'must be a JSON object, got {type(section).__name__}', field=name)
    return section


def parse_grid(data: Any) -> np.ndarray:
    """
    A grid is either an explicit list or {"start", "stop", "num", "spacing": "linear" | "log"}.
    """
    if isinstance(data, dict):
        start, stop, num = float(data['start']), float(data['stop']), int(data['num'])
        if num < 1 or stop < start:
            raise ValueError(f'bad grid {data}')
        if data.get('spacing', 'linear') == 'log':
            return np.geomspace(start, stop, num)
        return np.linspace(start, stop, num)
    grid = np.asarray(data, dtype=float)
    if grid.ndim != 1 or len(grid) == 0 or not np.all(np.isfinite(grid)):
        raise ValueError('grid must be a non-empty list of finite numbers')
    return grid


@dataclass
class ClassicalSettings:
    nu: float
    kappa: float


@dataclass
class SimulationSettings:
    reps: int
    seed: int
    n: Optional[int] = None
    maximal: bool = False
    delta: float = 0.01


@dataclass
class ExponentSettings:
    m: Optional[float] = None
    t_lo: Optional[float] = None
    t_hi: Optional[float] = None
    tolerance: float = 0.3
    points: int = 40


@dataclass
class ExperimentConfig:
    """
    One JSON document describes a full experiment. Only the sections a subcommand needs are required by it.
    """
    problem: SumProblem
    t_grid: np.ndarray
    route: Route = Route.B2
    space_x: Optional[SpaceDescriptor] = None
    space_y: Optional[SpaceDescriptor] = None
    u_const: Optional[float] = None
    classical: Optional[ClassicalSettings] = None
    p_grid: Optional[np.ndarray] = None
    sim: Optional[SimulationSettings] = None
    exponent: Optional[ExponentSettings] = None
    bound_scale: float = 1.0
    output_prefix: str = ''
    label: str = 'experiment'
    raw: Dict[str, Any] = field(default_factory=dict, repr=False)

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> ExperimentConfig:
        if not isinstance(data, dict):
            raise ConfigException('config must be a JSON object')
        if 'problem' not in data:
            raise ConfigException('missing section', field='problem')
        sim = None
        if 'sim' in data:
            sim = _field('sim', lambda: SimulationSettings(reps=int(data['sim']['reps']),
                                                           seed=int(data['sim'].get('seed', 0)),
                                                           n=_optional_int(data['sim'].get('n')),
                                                           maximal=bool(data['sim'].get('maximal', False)),
                                                           delta=float(data['sim'].get('delta', 0.01))))
            if not 0 < sim.delta < 1:
                raise ConfigException(f'delta must lie in (0, 1), got {sim.delta}', field='sim.delta')
        problem = _field('problem', lambda: SumProblem.from_json(data['problem']))
        if sim is not None and sim.n is not None:
            problem = _field('sim.n', lambda: problem.with_n(sim.n))
        t_grid = _field('t_grid', lambda: parse_grid(data.get('t_grid', {'start': 0, 'stop': 4, 'num': 41})))
        if np.any(t_grid < 0):
            raise ConfigException('thresholds must be non-negative', field='t_grid')
        route = _field('route', lambda: Route(data.get('route', Route.B2.value)))
        space_x = _field('space_x', lambda: space_from_json(data['space_x'])) if data.get('space_x') else None
        space_y = _field('space_y', lambda: space_from_json(data['space_y'])) if data.get('space_y') else None
        u_const = data.get('u_const')
        if u_const is not None:
            u_const = _field('u_const', lambda: float(u_const))
            if not u_const > 0 or math.isinf(u_const):
                raise ConfigException(f'must be positive and finite, got {u_const}', field='u_const')
        classical = None
        if data.get('classical') is not None:
            classical = _field('classical', lambda: ClassicalSettings(float(data['classical']['nu']),
                                                                      float(data['classical']['kappa'])))
            if classical.nu <= 0 or classical.kappa <= 0:
                raise ConfigException('nu and kappa must be positive', field='classical')
        p_grid = _field('p_grid', lambda: parse_grid(data['p_grid'])) if data.get('p_grid') is not None else None
        exponent = None
        if data.get('exponent') is not None:
            e = data['exponent']
            exponent = _field('exponent', lambda: ExponentSettings(m=_optional_float(e.get('m')),
                                                                   t_lo=_optional_float(e.get('t_lo')),
                                                                   t_hi=_optional_float(e.get('t_hi')),
                                                                   tolerance=float(e.get('tolerance', 0.3)),
                                                                   points=int(e.get('points', 40))))
        bound_scale = _field('bound_scale', lambda: float(data.get('bound_scale', 1.0)))
        if not bound_scale > 0:
            raise ConfigException(f'must be positive, got {bound_scale}', field='bound_scale')
        config = cls(problem=problem, t_grid=t_grid, route=route, space_x=space_x, space_y=space_y,
                     u_const=u_const, classical=classical, p_grid=p_grid, sim=sim, exponent=exponent,
                     bound_scale=bound_scale, output_prefix=str(_section(data, 'output').get('prefix', '')),
                     label=str(data.get('label', 'experiment')), raw=data)
        return config

    @classmethod
    def from_file(cls, path: str) -> ExperimentConfig:
        try:
            with open(path, 'r') as f:
                data = json.load(f)
        except OSError as e:
            raise ConfigException(f'cannot read {path}: {e}')
        except json.JSONDecodeError as e:
            raise ConfigException(f'{path} is not valid JSON: {e}')
        return cls.from_dict(data)

    def check_route(self):
        if self.route == Route.CLASSICAL:
            if self.classical is None:
                raise ConfigException('route classical needs {"nu", "kappa"}', field='classical')
        elif self.route == Route.GLS_ROSENTHAL:
            pass
        elif self.space_x is None:
            raise ConfigException(f'route {self.route.value} needs a source space', field='space_x')
        elif self.route == Route.PAIR and (self.space_y is None or self.u_const is None):
            raise ConfigException('route pair needs space_y and u_const', field='space_y')

    def require_sim(self) -> SimulationSettings:
        if self.sim is None:
            raise ConfigException('this command needs a simulation section', field='sim')
        return self.sim
