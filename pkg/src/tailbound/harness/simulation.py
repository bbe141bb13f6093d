from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import List, Tuple

import numpy as np
from line_profiler import profile

from tailbound.bounds.sum_problem import SumProblem
from tailbound.configs.numerics_config import numerics
from tailbound.data_types.exceptions import InvalidParameterException
from tailbound.middleware import get_middleware
from tailbound.model.rv_models import make_rng, draw


@dataclass
class SimulationRun:
    """
    :param maximal: simulate max_{k<=n} |xi_1 + ... + xi_k| / sqrt(sum sigma_i^2) instead of S_n
    """
    problem: SumProblem
    reps: int
    seed: int
    maximal: bool = False

    def __post_init__(self):
        if int(self.reps) != self.reps or self.reps < 1:
            raise InvalidParameterException(f'reps must be a positive integer, got {self.reps}')
        self.reps = int(self.reps)
        self.seed = int(self.seed)

    def validate_for_verification(self):
        if self.reps < numerics.min_verification_reps:
            raise InvalidParameterException(f'verification needs at least {numerics.min_verification_reps} '
                                            f'replications, got {self.reps}')


def rows_per_chunk(n: int) -> int:
    return max(1, min(numerics.chunk_size, numerics.chunk_elements // n))


def chunk_layout(reps: int, n: int) -> List[Tuple[int, int]]:
    """
    Fixed partition of the replications into (chunk_index, size); it depends on reps and n only,
    never on the number of workers.
    """
    rows = rows_per_chunk(n)
    return [(index, min(rows, reps - start)) for index, start in enumerate(range(0, reps, rows))]


@profile
def _simulate_chunk(problem: SumProblem, maximal: bool, seed: int, chunk_index: int, size: int) -> np.ndarray:
    rng = make_rng(seed, chunk_index)
    n = problem.n
    members = len(problem.members)
    draws = np.empty((size, n))
    for j in problem.active_indices:
        columns = np.arange(j, n, members)
        draws[:, columns] = draw(problem.members[j], (size, len(columns)), rng)
    if maximal:
        statistic = np.max(np.abs(np.cumsum(draws, axis=1)), axis=1)
    else:
        statistic = np.sum(draws, axis=1)
    return statistic / problem.total_sd


def simulate_sn(run: SimulationRun, threads: int = 1) -> np.ndarray:
    """
    reps draws of the normalized sum (or its running maximum). Chunk c draws from substream (seed, c) and
    chunks are concatenated in index order, so the output is identical for any thread count.
    """
    if threads < 1:
        raise InvalidParameterException(f'threads must be positive, got {threads}')
    layout = chunk_layout(run.reps, run.problem.n)
    get_middleware().logdebug(f'simulating {run.reps} x n={run.problem.n} in {len(layout)} chunks on {threads} threads')

    def work(chunk: Tuple[int, int]) -> np.ndarray:
        index, size = chunk
        return _simulate_chunk(run.problem, run.maximal, run.seed, index, size)

    if threads == 1:
        results = [work(chunk) for chunk in layout]
    else:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(work, layout))
    return np.concatenate(results)
