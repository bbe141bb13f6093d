from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import List, Dict, Any

import numpy as np

from tailbound.data_types.exceptions import InvalidParameterException, NotCenteredException
from tailbound.model.rv_models import RVSpec, variance, spec_from_json


@dataclass
class SumProblem:
    """
    xi_1, ..., xi_n independent; members are cycled when n exceeds their number.
    """
    members: List[RVSpec]
    n: int
    _sigmas: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        self.members = list(self.members)
        if not self.members:
            raise InvalidParameterException('a sum needs at least one member')
        if int(self.n) != self.n or self.n < 1:
            raise InvalidParameterException(f'n must be a positive integer, got {self.n}')
        self.n = int(self.n)
        member_sigmas = []
        for i, spec in enumerate(self.members):
            if not spec.is_centered:
                raise NotCenteredException(f'member {i} ({spec.label}) is not centered')
            var = variance(spec)
            if not var > 0:
                raise InvalidParameterException(f'member {i} ({spec.label}) has zero variance')
            member_sigmas.append(math.sqrt(var))
        member_sigmas = np.array(member_sigmas)
        self._sigmas = member_sigmas[np.arange(self.n) % len(self.members)]

    def member(self, i: int) -> RVSpec:
        return self.members[i % len(self.members)]

    @property
    def active_indices(self) -> range:
        """
        Member indices that actually occur among xi_1..xi_n.
        """
        return range(min(self.n, len(self.members)))

    @property
    def sigmas(self) -> np.ndarray:
        return self._sigmas

    @property
    def total_sd(self) -> float:
        return float(np.sqrt(np.sum(self._sigmas ** 2)))

    def with_n(self, n: int) -> SumProblem:
        return SumProblem(self.members, n)

    def scaled(self, c: float) -> SumProblem:
        return SumProblem([m.scaled(c) for m in self.members], self.n)

    def to_json(self) -> Dict[str, Any]:
        return {'members': [m.to_json() for m in self.members], 'n': self.n}

    @classmethod
    def from_json(cls, data: Dict[str, Any]) -> SumProblem:
        try:
            return cls([spec_from_json(m) for m in data['members']], data['n'])
        except KeyError as e:
            raise InvalidParameterException(f'problem misses field {e}')
