from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Optional

import numpy as np


class RVKind(Enum):
    RADEMACHER = 'rademacher'
    GAUSSIAN = 'gaussian'
    UNIFORM = 'uniform'
    TWO_POINT_SHARP = 'two_point_sharp'
    WEIBULL_SYM = 'weibull_sym'
    BOUNDED = 'bounded'


class Provenance(Enum):
    EXACT = 'exact'
    UPPER = 'upper'


class Route(Enum):
    B2 = 'b2'
    WB2 = 'wb2'
    PAIR = 'pair'
    CLASSICAL = 'classical'
    GLS_ROSENTHAL = 'gls_rosenthal'


@dataclass
class BoundCurve:
    """
    Upper bound on P(|S_n| >= t) over a threshold grid.
    :param values: raw bound values, may exceed 1; clipping happens only in clipped / the report layer
    :param provenance: EXACT when the bound is attained by some law, UPPER otherwise
    """
    t_grid: np.ndarray
    values: np.ndarray
    provenance: Provenance
    label: str = ''
    metadata: dict = field(default_factory=dict)

    def __post_init__(self):
        self.t_grid = np.asarray(self.t_grid, dtype=float)
        self.values = np.asarray(self.values, dtype=float)
        if self.t_grid.shape != self.values.shape:
            raise ValueError(f'grid and values differ in shape: {self.t_grid.shape} vs {self.values.shape}')

    @property
    def clipped(self) -> np.ndarray:
        return np.minimum(1.0, self.values)

    def scaled(self, factor: float) -> BoundCurve:
        return BoundCurve(t_grid=self.t_grid.copy(),
                          values=self.values * factor,
                          provenance=self.provenance,
                          label=f'{self.label}*{factor:g}' if factor != 1 else self.label,
                          metadata=dict(self.metadata))

    def value_at(self, t: float) -> Optional[float]:
        hits = np.nonzero(self.t_grid == t)[0]
        if len(hits) == 0:
            return None
        return float(self.values[hits[0]])
