"""Departures of a series from a baseline hyperbolic trend.

Reciprocal space reverses effects: a residual above the baseline line means
the series is growing more slowly than the hyperbola, one below means faster.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import InsufficientDataError
from .fit import REL_EPS, FitOptions, HyperbolicFit, fit_first_order, residuals_recip
from .series import TimeSeries, slice as slice_series


class Direction(str, Enum):
    SLOWER = "slower"
    FASTER = "faster"
    NONE = "none"


@dataclass(frozen=True)
class DivergenceParams:
    z_threshold: float = 2.0
    min_run: int = 3

    def __post_init__(self):
        if self.z_threshold < 0:
            raise ValueError("z_threshold must be non-negative")
        if self.min_run < 1:
            raise ValueError("min_run must be >= 1")


@dataclass(frozen=True)
class DivergenceReport:
    direction: Direction
    onset: float | None
    run_length: int
    max_z: float
    baseline: HyperbolicFit
    z_scores: tuple[tuple[float, float], ...] = ()   # (year, z) after the baseline window


def divergence_sign_of(residual_run) -> Direction:
    run = list(residual_run)
    if not run:
        raise ValueError("residual run is empty")
    if all(r > 0 for r in run):
        return Direction.SLOWER
    if all(r < 0 for r in run):
        return Direction.FASTER
    raise ValueError("residual run mixes signs (or contains zeros)")


def residual_scale(fit: HyperbolicFit, baseline: TimeSeries) -> float:
    """Baseline RMSE, floored so a noiseless baseline does not divide by zero."""
    y = 1.0 / baseline.values
    return max(fit.rmse_recip, REL_EPS * float(np.sqrt(np.mean(y**2))))


def detect_divergence(series: TimeSeries, baseline_window: tuple[float, float],
                      params: DivergenceParams | None = None,
                      options: FitOptions | None = None) -> DivergenceReport:
    """Find an ongoing departure from the trend fitted on ``baseline_window``.

    Residuals after the window are divided by the baseline RMSE. Reading back
    from the last sample, the longest run of same-signed residuals whose
    ``|z|`` all exceed ``params.z_threshold`` is collected; if it holds at least
    ``params.min_run`` samples its first year is the onset.
    """
    params = params or DivergenceParams()
    lo, hi = baseline_window
    base = slice_series(series, lo, hi)
    if len(base) < 4:
        raise InsufficientDataError(
            f"baseline window {lo}..{hi} holds {len(base)} points; need at least 4"
        )
    tail = TimeSeries(tuple(p for p in series.points if p.t > hi), series.unit, series.label)
    if len(tail) == 0:
        raise ValueError(f"series has no points after the baseline window end {hi}")

    fit = fit_first_order(base, options)
    sigma = residual_scale(fit, base)
    res = residuals_recip(fit, tail)
    z = [(t, r / sigma) for t, r in res]

    run: list[tuple[float, float]] = []
    last_sign = np.sign(z[-1][1])
    for t, zi in reversed(z):
        if np.sign(zi) != last_sign or abs(zi) <= params.z_threshold:
            break
        run.append((t, zi))
    run.reverse()

    if last_sign == 0 or len(run) < params.min_run:
        return DivergenceReport(Direction.NONE, None, 0,
                                float(max(abs(zi) for _, zi in z)), fit, tuple(z))
    return DivergenceReport(divergence_sign_of(zi for _, zi in run), run[0][0], len(run),
                            float(max(abs(zi) for _, zi in run)), fit, tuple(z))
