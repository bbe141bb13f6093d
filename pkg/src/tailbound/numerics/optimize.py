import math
from typing import Callable, Tuple, NamedTuple

import numpy as np
from line_profiler import profile

from tailbound.configs.numerics_config import numerics

inv_golden_ratio = (math.sqrt(5) - 1) / 2


def _safe(f: Callable[[float], float], x: float) -> float:
    value = f(x)
    if value is None or math.isnan(value):
        return -math.inf
    return value


@profile
def golden_section_maximize(f: Callable[[float], float], a: float, b: float,
                            iterations: int = None) -> Tuple[float, float]:
    """
    Maximizes a function that is unimodal on [a, b].
    :return: (argmax, max)
    """
    if iterations is None:
        iterations = numerics.golden_iterations
    if a > b:
        a, b = b, a
    c = b - inv_golden_ratio * (b - a)
    d = a + inv_golden_ratio * (b - a)
    fc, fd = _safe(f, c), _safe(f, d)
    for _ in range(iterations):
        if b - a <= 4 * np.finfo(float).eps * max(abs(a), abs(b), 1e-300):
            break
        if fc >= fd:
            b, d, fd = d, c, fc
            c = b - inv_golden_ratio * (b - a)
            fc = _safe(f, c)
        else:
            a, c, fc = c, d, fd
            d = a + inv_golden_ratio * (b - a)
            fd = _safe(f, d)
    if fc >= fd:
        return c, fc
    return d, fd


def clamp_offset(x: float) -> float:
    return numerics.endpoint_offset * max(1.0, abs(x))


def scan_grid(lo: float, hi: float, n: int) -> np.ndarray:
    """
    Coarse grid over the open interval (lo, hi), log-spaced towards every endpoint. Infinite endpoints are
    covered up to 10^scan_log_max away from the finite end (or from 0).
    """
    if lo > hi:
        raise ValueError(f'empty interval ({lo}, {hi})')
    if lo == hi:
        return np.array([lo])
    half = max(n // 2, 2)
    offsets = np.logspace(numerics.scan_log_min, numerics.scan_log_max, half)
    lo_finite, hi_finite = math.isfinite(lo), math.isfinite(hi)
    if lo_finite and hi_finite:
        lo_c, hi_c = lo + clamp_offset(lo), hi - clamp_offset(hi)
        if lo_c >= hi_c:
            return np.array([(lo + hi) / 2])
        unit = np.logspace(numerics.scan_log_min, 0, half)
        unit = np.concatenate([unit, 1 - unit, np.linspace(0, 1, max(n // 4, 2))])
        grid = lo_c + (hi_c - lo_c) * np.clip(unit, 0, 1)
    elif lo_finite:
        grid = lo + clamp_offset(lo) + offsets * max(1.0, abs(lo))
    elif hi_finite:
        grid = hi - clamp_offset(hi) - offsets * max(1.0, abs(hi))
    else:
        grid = np.concatenate([-offsets, [0.0], offsets])
    return np.unique(grid)


class ScanResult(NamedTuple):
    argmax: float
    value: float
    unbounded: bool


@profile
def scan_and_refine(objective: Callable[[float], float], lo: float, hi: float, n: int = None) -> ScanResult:
    """
    Supremum of objective over (lo, hi): coarse scan, expansion along infinite sides while the objective keeps
    growing, then golden-section refinement inside the best grid cell.
    """
    if n is None:
        n = numerics.scan_points
    grid = scan_grid(lo, hi, n)
    values = np.array([_safe(objective, x) for x in grid])
    if len(grid) == 1:
        return ScanResult(float(grid[0]), float(values[0]), False)
    if np.all(values == -np.inf):
        return ScanResult(float(grid[0]), -math.inf, False)
    if np.any(values == np.inf):
        k = int(np.argmax(values))
        return ScanResult(float(grid[k]), math.inf, True)
    k = int(np.argmax(values))
    last = len(grid) - 1
    for side, edge in ((1, last), (-1, 0)):
        infinite = not math.isfinite(hi) if side == 1 else not math.isfinite(lo)
        if k != edge or not infinite:
            continue
        # keep stretching the outermost point; still growing after the cap means an unbounded supremum
        x_prev, x, f_x = grid[edge - side], grid[edge], values[edge]
        while True:
            x_next = x * numerics.growth_factor if x != 0 else side * 1.0
            if abs(x_next) > 1e250:
                return ScanResult(float(x), math.inf, True)
            f_next = _safe(objective, x_next)
            if f_next == math.inf:
                return ScanResult(float(x_next), math.inf, True)
            if f_next <= f_x:
                break
            x_prev, x, f_x = x, x_next, f_next
        x_star, f_star = golden_section_maximize(objective, x_prev, x_next)
        if f_x >= f_star:
            return ScanResult(float(x), float(f_x), False)
        return ScanResult(float(x_star), float(f_star), False)
    a = grid[max(k - 1, 0)]
    b = grid[min(k + 1, last)]
    x_star, f_star = golden_section_maximize(objective, a, b)
    if values[k] >= f_star:
        return ScanResult(float(grid[k]), float(values[k]), False)
    return ScanResult(float(x_star), float(f_star), False)
