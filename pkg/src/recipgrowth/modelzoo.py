"""Competing trajectory families, all scored on reciprocal-space SSE.

In reciprocal space a first-order hyperbola is a decreasing straight line, a
higher-order hyperbola a polynomial that curves down to the time axis, an
exponential a decaying exponential, and a decreasing hyperbola a rising line.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from numpy.polynomial import Polynomial

from .errors import BeyondSingularityError, FitError, InsufficientDataError
from .fit import FitOptions, HyperbolicFit, bic, fit_first_order
from .segment import BIC_TIE
from .series import TimeSeries

HYPERBOLIC1 = "Hyperbolic1"
DECREASING = "DecreasingHyperbolic"
EXPONENTIAL = "Exponential"


@dataclass(frozen=True)
class ModelClass:
    tag: str
    k: int | None = None

    def __post_init__(self):
        if self.tag == "HyperbolicOrderK" and (self.k is None or self.k < 2):
            raise ValueError("HyperbolicOrderK needs k >= 2")

    @classmethod
    def order(cls, k: int) -> "ModelClass":
        return cls("HyperbolicOrderK", k)

    @property
    def name(self) -> str:
        return f"HyperbolicOrder{self.k}" if self.tag == "HyperbolicOrderK" else self.tag

    def __str__(self):
        return self.name


@dataclass(frozen=True)
class PolyRecipFit:
    coefficients: tuple[float, ...]   # c0..ck in the raw-year basis
    window: tuple[float, float]
    n: int
    sse_recip: float
    bic: float
    _poly: Polynomial = field(repr=False, compare=False, default=None)

    @property
    def degree(self) -> int:
        return len(self.coefficients) - 1

    def reciprocal(self, t):
        # the scaled-domain polynomial is far better conditioned than the raw coefficients
        return self._poly(np.asarray(t, dtype=float))


@dataclass(frozen=True)
class ExpFit:
    """``S(t) = A exp(r t)``, so ``1/S(t) = exp(-r t) / A``."""

    amplitude: float
    rate: float
    window: tuple[float, float]
    n: int
    sse_recip: float
    bic: float
    converged: bool
    iterations: int
    log_amplitude: float = 0.0

    def reciprocal(self, t):
        return np.exp(-self.log_amplitude - self.rate * np.asarray(t, dtype=float))

    def value(self, t):
        return np.exp(self.log_amplitude + self.rate * np.asarray(t, dtype=float))


def _recip_scale(series: TimeSeries) -> float:
    return float(np.sum(1.0 / series.values**2))


def fit_poly_recip(series: TimeSeries, k: int) -> PolyRecipFit:
    """Least-squares degree-``k`` polynomial through the reciprocals."""
    if k < 2:
        raise ValueError("degree must be >= 2; use fit_first_order for straight lines")
    n = len(series)
    if n < k + 2:
        raise InsufficientDataError(f"degree {k} needs at least {k + 2} points, got {n}")
    t, y = series.t, 1.0 / series.values
    poly = Polynomial.fit(t, y, k)
    sse = float(np.sum((y - poly(t)) ** 2))
    grid = np.concatenate([t, np.linspace(t[0], t[-1], 200)])
    if np.any(poly(grid) <= 0):
        raise FitError(f"degree-{k} reciprocal polynomial is not positive over the window")
    raw = poly.convert().coef
    coef = np.zeros(k + 1)
    coef[: len(raw)] = raw
    return PolyRecipFit(tuple(float(c) for c in coef), (float(t[0]), float(t[-1])), n, sse,
                        bic(sse, n, k + 1, _recip_scale(series)), poly)


def fit_exponential(series: TimeSeries, max_iter: int = 100, rtol: float = 1e-12) -> ExpFit:
    """Exponential fit minimizing reciprocal-space SSE.

    Starts from a straight line through ``ln(1/value)`` and refines by
    Gauss-Newton with step halving. Stops when the relative SSE change drops
    below ``rtol`` or after ``max_iter`` iterations; ``converged`` tells which.
    """
    n = len(series)
    if n < 3:
        raise InsufficientDataError(f"exponential fit needs at least 3 points, got {n}")
    t, y = series.t, 1.0 / series.values
    tc = float(t.mean())
    x = t - tc

    # model: y = exp(b - r x)
    slope, b = np.polyfit(x, np.log(y), 1)
    r = -slope

    def sse_of(b_, r_):
        return float(np.sum((y - np.exp(b_ - r_ * x)) ** 2))

    sse = sse_of(b, r)
    converged = sse == 0.0
    it = 0
    while not converged and it < max_iter:
        it += 1
        m = np.exp(b - r * x)
        jac = np.column_stack([m, -x * m])
        step, *_ = np.linalg.lstsq(jac, y - m, rcond=None)
        lam = 1.0
        while True:
            nb, nr = b + lam * step[0], r + lam * step[1]
            new = sse_of(nb, nr)
            if new <= sse or lam < 1e-10:
                break
            lam /= 2
        if new > sse:
            converged = True   # no descent direction left; at the minimum to working precision
            break
        change = (sse - new) / sse if sse > 0 else 0.0
        b, r, sse = nb, nr, new
        if change < rtol or sse == 0.0:
            converged = True
    log_a = -(b + r * tc)
    return ExpFit(amplitude=math.exp(log_a) if log_a < 700 else math.inf, rate=float(r),
                  window=(float(t[0]), float(t[-1])), n=n, sse_recip=sse,
                  bic=bic(sse, n, 2, _recip_scale(series)), converged=converged,
                  iterations=it, log_amplitude=float(log_a))


@dataclass(frozen=True)
class Candidate:
    model: ModelClass
    bic: float
    n_params: int
    sse_recip: float
    params: dict
    fit: object = field(repr=False, compare=False, default=None)


@dataclass(frozen=True)
class ClassificationResult:
    ranking: tuple[Candidate, ...]   # ascending BIC
    winner: Candidate


def pick_winner(ranking) -> Candidate:
    """Minimum BIC, except that candidates within ``BIC_TIE`` of it lose to the
    one with the fewest parameters."""
    lowest = ranking[0].bic
    close = [c for c in ranking if c.bic - lowest < BIC_TIE]
    return min(close, key=lambda c: (c.n_params, c.bic))


def classify(series: TimeSeries, max_poly_degree: int = 3) -> ClassificationResult:
    n = len(series)
    if n < 5:
        raise InsufficientDataError(f"classification needs at least 5 points, got {n}")
    cands = []

    lin = fit_first_order(series, FitOptions())
    tag = DECREASING if lin.a1 > 0 else HYPERBOLIC1
    cands.append(Candidate(ModelClass(tag), bic(lin.sse, n, 2, _recip_scale(series)), 2,
                           lin.sse, {"a0": lin.a0, "a1": lin.a1}, lin))

    for k in range(2, max_poly_degree + 1):
        if n < k + 2:
            break
        try:
            pf = fit_poly_recip(series, k)
        except FitError:
            continue
        cands.append(Candidate(ModelClass.order(k), pf.bic, k + 1, pf.sse_recip,
                               {"coefficients": list(pf.coefficients)}, pf))

    ef = fit_exponential(series)
    cands.append(Candidate(ModelClass(EXPONENTIAL), ef.bic, 2, ef.sse_recip,
                           {"amplitude": ef.amplitude, "log_amplitude": ef.log_amplitude,
                            "rate": ef.rate, "converged": ef.converged}, ef))

    ranking = tuple(sorted(cands, key=lambda c: (c.bic, c.n_params)))
    return ClassificationResult(ranking, pick_winner(ranking))


@dataclass(frozen=True)
class RatioModel:
    """Quotient of two first-order hyperbolas, e.g. GDP over population.

    ``value(t) = (b0 + b1 t) / (A0 + A1 t)`` with ``(A0, A1)`` the numerator's
    reciprocal line and ``(b0, b1)`` the denominator's.
    """

    numerator: HyperbolicFit
    denominator: HyperbolicFit


def ratio_value(model: RatioModel, t: float) -> float:
    num_line = model.numerator.a0 + model.numerator.a1 * t
    den_line = model.denominator.a0 + model.denominator.a1 * t
    if not num_line > 0:
        raise BeyondSingularityError(f"numerator line is {num_line:.6g} <= 0 at t = {t}")
    if not den_line > 0:
        raise BeyondSingularityError(f"denominator line is {den_line:.6g} <= 0 at t = {t}")
    return den_line / num_line
