"""First-order hyperbolic fits, ``S(t) = 1 / (a0 + a1 t)``, done as straight
lines in reciprocal space."""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import BeyondSingularityError, DegenerateDesignError, InsufficientDataError
from .series import TimeSeries

# Residual sums below this fraction of the data scale are treated as exact zeros.
REL_EPS = 1e-9


class Weighting(str, Enum):
    UNIFORM = "uniform"
    VALUE_SQUARED = "value_squared"


@dataclass(frozen=True)
class FitOptions:
    """``value_squared`` weights each reciprocal residual by value**2, which
    undoes the magnification of errors at small values and approximates a
    least-squares fit in value space."""

    weighting: Weighting = Weighting.UNIFORM

    def __post_init__(self):
        object.__setattr__(self, "weighting", Weighting(self.weighting))

    def weights(self, values: np.ndarray) -> np.ndarray:
        if self.weighting is Weighting.VALUE_SQUARED:
            return values**2
        return np.ones_like(values)


@dataclass(frozen=True)
class HyperbolicFit:
    a0: float
    a1: float
    window: tuple[float, float]
    n: int
    rmse_recip: float
    r2_recip: float
    rmse_direct: float | None   # None when the model is undefined at a fitted year
    sse: float                  # minimized objective (weighted when weighting != uniform)
    weighting: Weighting = Weighting.UNIFORM
    unit: str = ""

    def line(self, t):
        """Raw reciprocal line ``a0 + a1 t`` (no singularity check)."""
        return self.a0 + self.a1 * np.asarray(t, dtype=float)

    @property
    def singularity(self) -> float | None:
        return singularity_time(self)


def line_fit(a0: float, a1: float, unit: str = "") -> HyperbolicFit:
    """Wrap bare constants (e.g. printed ones) as a fit with no data behind it."""
    return HyperbolicFit(a0=float(a0), a1=float(a1), window=(math.nan, math.nan), n=0,
                         rmse_recip=math.nan, r2_recip=math.nan, rmse_direct=None,
                         sse=math.nan, unit=unit)


def _wls_line(t: np.ndarray, y: np.ndarray, w: np.ndarray) -> tuple[float, float]:
    # centred design; years ~2000 against slopes ~1e-6 are badly conditioned otherwise
    tc = np.sum(w * t) / np.sum(w)
    x = t - tc
    sxx = np.sum(w * x * x)
    if not sxx > 0:
        raise DegenerateDesignError("all fitted years are identical")
    slope = np.sum(w * x * y) / sxx
    level = np.sum(w * y) / np.sum(w)
    return float(level - slope * tc), float(slope)


def fit_first_order(series: TimeSeries, options: FitOptions | None = None) -> HyperbolicFit:
    """Least-squares straight line through the reciprocals of ``series``.

    Parameters
    ----------
    series : TimeSeries
        At least two points with distinct years.
    options : FitOptions, optional
        Residual weighting; uniform by default.

    Returns
    -------
    HyperbolicFit
        ``a0`` and ``a1`` at the ``t = 0`` origin, plus goodness metrics.
    """
    options = options or FitOptions()
    if len(series) < 2:
        raise InsufficientDataError(f"need at least 2 points to fit, got {len(series)}")
    t = series.t
    v = series.values
    y = 1.0 / v
    w = options.weights(v)
    a0, a1 = _wls_line(t, y, w)

    resid = y - (a0 + a1 * t)
    sse = float(np.sum(w * resid**2))
    rmse_recip = float(np.sqrt(np.mean(resid**2)))
    ss_tot = float(np.sum((y - y.mean()) ** 2))
    ss_res = float(np.sum(resid**2))
    scale = float(np.sum(y**2))
    if ss_tot <= (REL_EPS**2) * scale:
        r2 = 1.0 if ss_res <= (REL_EPS**2) * scale else 0.0
    else:
        r2 = min(1.0, max(0.0, 1.0 - ss_res / ss_tot))

    den = a0 + a1 * t
    rmse_direct = float(np.sqrt(np.mean((v - 1.0 / den) ** 2))) if np.all(den > 0) else None

    return HyperbolicFit(a0=a0, a1=a1, window=(float(t[0]), float(t[-1])), n=len(series),
                         rmse_recip=rmse_recip, r2_recip=r2, rmse_direct=rmse_direct, sse=sse,
                         weighting=options.weighting, unit=series.unit)


def _denominator(fit: HyperbolicFit, t: float) -> float:
    d = fit.a0 + fit.a1 * t
    if not d > 0:
        raise BeyondSingularityError(
            f"a0 + a1*t = {d:.6g} <= 0 at t = {t}; the model has blown up"
        )
    return d


def evaluate(fit: HyperbolicFit, t: float) -> float:
    return 1.0 / _denominator(fit, t)


def singularity_time(fit: HyperbolicFit) -> float | None:
    """Year where the reciprocal line reaches zero, or None if it never does
    going forward (``a1 >= 0``)."""
    if fit.a1 < 0:
        return -fit.a0 / fit.a1
    return None


def growth_rate(fit: HyperbolicFit, t: float) -> float:
    """Relative growth rate ``S'/S = -a1 S(t)`` per year."""
    return -fit.a1 * evaluate(fit, t)


def residuals_recip(fit: HyperbolicFit, series: TimeSeries) -> list[tuple[float, float]]:
    """``1/value - (a0 + a1 t)`` for each point, in series order.

    Positive means the observation lies below the model, i.e. slower growth.
    """
    return [(p.t, 1.0 / p.value - (fit.a0 + fit.a1 * p.t)) for p in series.points]


def bic(sse: float, n: int, n_params: int, scale: float) -> float:
    """Gaussian BIC from a residual sum of squares, ``n ln(SSE/n) + p ln n``.

    ``scale`` is the sum of squared (weighted) reciprocal values; SSE is floored
    at ``REL_EPS**2 * scale`` so exact fits compare by parameter count alone.
    """
    floor = (REL_EPS**2) * scale
    return n * math.log(max(sse, floor, np.finfo(float).tiny) / n) + n_params * math.log(n)
