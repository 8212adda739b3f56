"""Piecewise first-order hyperbolic fits with breakpoints at sample boundaries."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InsufficientDataError, UndefinedRatioError
from .fit import FitOptions, HyperbolicFit, bic, fit_first_order
from .series import TimeSeries

# A BIC lead smaller than this is not enough to justify extra parameters.
BIC_TIE = 2.0


@dataclass(frozen=True)
class SegmentedFit:
    breakpoints: tuple[float, ...]
    segments: tuple[HyperbolicFit, ...]
    sse_recip: float
    bic: float
    cuts: tuple[int, ...] = ()   # index of the first sample of each later segment

    @property
    def n_segments(self) -> int:
        return len(self.segments)


def n_params(n_segments: int) -> int:
    return 2 * n_segments + (n_segments - 1)


def _subseries(series: TimeSeries, i: int, j: int) -> TimeSeries:
    return TimeSeries(series.points[i:j], series.unit, series.label)


def segment_cost_table(series: TimeSeries, min_pts: int,
                       options: FitOptions) -> dict[tuple[int, int], float]:
    """SSE of every admissible contiguous block ``[i, j)`` with at least ``min_pts`` samples."""
    n = len(series)
    return {
        (i, j): fit_first_order(_subseries(series, i, j), options).sse
        for i in range(n)
        for j in range(i + min_pts, n + 1)
    }


def _best_cuts(cost, n: int, k: int, min_pts: int) -> tuple[float, tuple[int, ...]] | None:
    # best[m][j]: minimal SSE covering [0, j) with m segments
    inf = float("inf")
    best = [[inf] * (n + 1) for _ in range(k + 1)]
    back = [[-1] * (n + 1) for _ in range(k + 1)]
    best[0][0] = 0.0
    for m in range(1, k + 1):
        for j in range(m * min_pts, n + 1):
            for i in range((m - 1) * min_pts, j - min_pts + 1):
                if best[m - 1][i] == inf:
                    continue
                c = best[m - 1][i] + cost[(i, j)]
                if c < best[m][j]:
                    best[m][j] = c
                    back[m][j] = i
    if best[k][n] == inf:
        return None
    cuts = []
    j = n
    for m in range(k, 0, -1):
        i = back[m][j]
        if m > 1:
            cuts.append(i)
        j = i
    return best[k][n], tuple(reversed(cuts))


def build_segmented(series: TimeSeries, cuts: tuple[int, ...],
                    options: FitOptions | None = None) -> SegmentedFit:
    """Fit each block delimited by ``cuts`` independently and score the result."""
    options = options or FitOptions()
    bounds = (0, *cuts, len(series))
    segs = tuple(fit_first_order(_subseries(series, i, j), options)
                 for i, j in zip(bounds, bounds[1:]))
    t = series.years
    breaks = tuple((t[c - 1] + t[c]) / 2.0 for c in cuts)
    sse = float(sum(s.sse for s in segs))
    return SegmentedFit(breaks, segs, sse, bic(sse, len(series), n_params(len(segs)),
                                                _scale(series, options)), tuple(cuts))


def _scale(series: TimeSeries, options: FitOptions) -> float:
    v = series.values
    return float(np.sum(options.weights(v) / v**2))


def select(candidates: list[SegmentedFit]) -> SegmentedFit:
    """Lowest BIC, except that anything within ``BIC_TIE`` of the minimum
    loses to the candidate with the fewest segments."""
    lowest = min(c.bic for c in candidates)
    close = [c for c in candidates if c.bic - lowest < BIC_TIE]
    return min(close, key=lambda c: (c.n_segments, c.bic))


def fit_segmented(series: TimeSeries, max_segments: int = 2, min_pts: int = 4,
                  options: FitOptions | None = None) -> SegmentedFit:
    """Choose 1..``max_segments`` independent reciprocal lines by BIC.

    For each segment count the SSE-optimal placement of breakpoints is found by
    dynamic programming over sample boundaries; the counts are then compared by
    BIC with ``2 per segment + 1 per breakpoint`` parameters. Breakpoints are
    reported halfway between the neighbouring sample years.
    """
    options = options or FitOptions()
    if max_segments < 1:
        raise ValueError("max_segments must be >= 1")
    if min_pts < 3:
        raise ValueError("min_pts must be >= 3")
    n = len(series)
    if n < max_segments * min_pts:
        raise InsufficientDataError(
            f"{n} points cannot hold {max_segments} segments of {min_pts} points"
        )
    cost = segment_cost_table(series, min_pts, options)
    candidates = []
    for k in range(1, max_segments + 1):
        found = _best_cuts(cost, n, k, min_pts)
        if found is not None:
            candidates.append(build_segmented(series, found[1], options))
    return select(candidates)


def acceleration_ratio(seg: SegmentedFit, i: int) -> float:
    """``|a1|`` of segment ``i + 1`` over ``|a1|`` of segment ``i``."""
    if not 0 <= i < seg.n_segments - 1:
        raise ValueError(f"breakpoint index {i} out of range for {seg.n_segments} segments")
    before, after = seg.segments[i].a1, seg.segments[i + 1].a1
    if before == 0 or after == 0:
        raise UndefinedRatioError("acceleration ratio needs nonzero slopes on both sides")
    return abs(after) / abs(before)
