from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence, Optional, Tuple

import numpy as np
from scipy import stats

from tailbound.configs.numerics_config import numerics
from tailbound.data_types.data_types import BoundCurve
from tailbound.data_types.exceptions import InvalidParameterException, EstimationRefusedException


def dkw_halfwidth(reps: int, delta: float) -> float:
    """
    Dvoretzky-Kiefer-Wolfowitz: the empirical tail is uniformly within this of the true one
    with probability at least 1 - delta.
    """
    if not 0 < delta < 1:
        raise InvalidParameterException(f'delta must lie in (0, 1), got {delta}')
    if reps < 1:
        raise InvalidParameterException(f'reps must be positive, got {reps}')
    return math.sqrt(math.log(2 / delta) / (2 * reps))


def empirical_tail_values(samples: np.ndarray, t_grid: Sequence[float]) -> np.ndarray:
    """
    Fraction of |samples| >= t for every t.
    """
    magnitudes = np.sort(np.abs(np.asarray(samples, dtype=float)))
    t_grid = np.asarray(t_grid, dtype=float)
    counts = len(magnitudes) - np.searchsorted(magnitudes, t_grid, side='left')
    return counts / len(magnitudes)


@dataclass
class EmpiricalTail:
    t_grid: np.ndarray
    empirical: np.ndarray
    band_halfwidth: float
    reps: int
    delta: float


def empirical_tail(samples: np.ndarray, t_grid: Sequence[float], delta: float) -> EmpiricalTail:
    samples = np.asarray(samples, dtype=float)
    if len(samples) == 0:
        raise InvalidParameterException('no samples')
    return EmpiricalTail(t_grid=np.asarray(t_grid, dtype=float),
                         empirical=empirical_tail_values(samples, t_grid),
                         band_halfwidth=dkw_halfwidth(len(samples), delta),
                         reps=len(samples),
                         delta=delta)


@dataclass
class TailReport:
    t_grid: np.ndarray
    empirical: np.ndarray
    band_halfwidth: float
    bound: BoundCurve
    violations: np.ndarray
    reps: int = 0
    delta: float = 0.0
    seed: Optional[int] = None
    metadata: dict = field(default_factory=dict)

    @property
    def lower_band(self) -> np.ndarray:
        return self.empirical - self.band_halfwidth


def _violations(empirical: np.ndarray, band_halfwidth: float, bound: np.ndarray) -> np.ndarray:
    return np.nonzero(empirical - band_halfwidth > bound)[0]


def build_tail_report(samples: np.ndarray, bound: BoundCurve, delta: float, seed: Optional[int] = None) -> TailReport:
    tail = empirical_tail(samples, bound.t_grid, delta)
    return TailReport(t_grid=tail.t_grid,
                      empirical=tail.empirical,
                      band_halfwidth=tail.band_halfwidth,
                      bound=bound,
                      violations=_violations(tail.empirical, tail.band_halfwidth, bound.values),
                      reps=tail.reps,
                      delta=delta,
                      seed=seed)


@dataclass
class Verdict:
    passed: bool
    violations: np.ndarray
    magnitudes: np.ndarray

    @property
    def max_violation(self) -> float:
        return float(np.max(self.magnitudes)) if len(self.magnitudes) else 0.0


def verify_bound(report: TailReport) -> Verdict:
    """
    Passes iff empirical - band <= bound at every grid point.
    """
    excess = report.empirical - report.band_halfwidth - report.bound.values
    violations = _violations(report.empirical, report.band_halfwidth, report.bound.values)
    return Verdict(passed=len(violations) == 0, violations=violations, magnitudes=excess[violations])


# %% tail exponent
@dataclass
class ExponentEstimate:
    slope: float
    stderr: float
    intercept: float
    points: int


def default_exponent_window(samples: np.ndarray) -> Tuple[float, float]:
    """
    Thresholds whose empirical tails span the configured probability window.
    """
    tail_hi, tail_lo = numerics.exponent_window[1], numerics.exponent_window[0]
    magnitudes = np.abs(np.asarray(samples, dtype=float))
    return float(np.quantile(magnitudes, 1 - tail_hi)), float(np.quantile(magnitudes, 1 - tail_lo))


def estimate_tail_exponent(samples: np.ndarray, t_lo: float, t_hi: float, points: int = 40) -> ExponentEstimate:
    """
    Least-squares slope of ln(-ln T(t)) against ln t, with T the empirical tail of |samples|.
    Grid points whose empirical tail is 0 or 1 are skipped.
    """
    if not 0 < t_lo < t_hi:
        raise InvalidParameterException(f'need 0 < t_lo < t_hi, got ({t_lo}, {t_hi})')
    t_grid = np.geomspace(t_lo, t_hi, points)
    tail = empirical_tail_values(samples, t_grid)
    usable = (tail > 0) & (tail < 1)
    if np.count_nonzero(usable) < numerics.min_exponent_points:
        raise EstimationRefusedException(f'only {np.count_nonzero(usable)} usable tail points in '
                                         f'[{t_lo:g}, {t_hi:g}], need {numerics.min_exponent_points}')
    x = np.log(t_grid[usable])
    y = np.log(-np.log(tail[usable]))
    fit = stats.linregress(x, y)
    return ExponentEstimate(slope=float(fit.slope), stderr=float(fit.stderr), intercept=float(fit.intercept),
                            points=int(np.count_nonzero(usable)))


def moment_estimate(samples: np.ndarray, p: float) -> Tuple[float, float]:
    """
    Monte Carlo E|x|^p with its standard error.
    """
    powers = np.abs(np.asarray(samples, dtype=float)) ** p
    return float(np.mean(powers)), float(np.std(powers, ddof=1) / math.sqrt(len(powers)))
