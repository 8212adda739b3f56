"""Acceptance criteria, each checked at its stated tolerance.

Run with ``pytest tests/test_acceptance.py -s``; one PASS/FAIL line per
criterion is printed as it runs and again in the summary.
"""

import math
import time

import numpy as np

import synth
from recipgrowth import (Direction, TimeSeries, acceleration_ratio, classify, detect_divergence,
                         exclude, fit_first_order, fit_segmented, line_fit, load_bundled,
                         singularity_time, slice)
from test_segment import enumerate_best


def within(got, want, rel):
    return abs(got - want) <= rel * abs(want)


def report(record, criterion, checks):
    """``checks`` maps a label to (ok, observed text); returns overall ok."""
    ok = all(c for c, _ in checks.values())
    detail = "; ".join(f"{k} {'ok' if c else 'MISS'} ({v})" for k, (c, v) in checks.items())
    return record(criterion, ok, detail)


def test_criterion_1_world_population(acceptance_line):
    start = time.perf_counter()
    wp = exclude(slice(load_bundled("world_population"), 1000, 1950), {1})
    f = fit_first_order(wp)
    elapsed = time.perf_counter() - start
    ok = report(acceptance_line, 1, {
        "a0 +-5%": (within(f.a0, 8.724, 0.05), f"{f.a0:.5g} vs 8.724"),
        "a1 +-5%": (within(f.a1, -4.267e-3, 0.05), f"{f.a1:.5g} vs -4.267e-3"),
        "runtime < 1 s": (elapsed < 1.0, f"{elapsed * 1e3:.1f} ms"),
    })
    assert ok


def test_criterion_2_africa(acceptance_line):
    africa = exclude(load_bundled("africa_population"), {1})
    seg = fit_segmented(slice(africa, 1000, 1960), 2, 4)
    checks = {"two segments": (seg.n_segments == 2, f"{seg.n_segments}")}
    if seg.n_segments == 2:
        (s, f), brk = seg.segments, seg.breakpoints[0]
        ratio = acceleration_ratio(seg, 0)
        checks.update({
            "breakpoint in [1850, 1890]": (1850 <= brk <= 1890, f"{brk:g}"),
            "slow segment +-5%": (within(s.a0, 51.05, 0.05) and within(s.a1, -2.036e-2, 0.05),
                                  f"{s.a0:.4g}, {s.a1:.4g}"),
            "fast segment +-5%": (within(f.a0, 170.5, 0.05) and within(f.a1, -8.515e-2, 0.05),
                                  f"{f.a0:.4g}, {f.a1:.4g}"),
            "ratio in [3.8, 4.6]": (3.8 <= ratio <= 4.6, f"{ratio:.3f}"),
        })
    rep = detect_divergence(africa, (1870, 1960))
    checks["divergence slower"] = (rep.direction is Direction.SLOWER, rep.direction.value)
    checks["onset in [1970, 1985]"] = (rep.onset is not None and 1970 <= rep.onset <= 1985,
                                       f"{rep.onset}")
    assert report(acceptance_line, 2, checks)


def test_criterion_3_western_europe(acceptance_line):
    we = load_bundled("western_europe_gdp")
    f = fit_first_order(exclude(slice(we, 1500, 1950), {1950}))
    r = 1 / we.value_at(1950) - float(f.line(1950))
    z = r / f.rmse_recip
    ok = report(acceptance_line, 3, {
        "a0 +-5%": (within(f.a0, 9.697e-2, 0.05), f"{f.a0:.5g} vs 9.697e-2"),
        "a1 +-5%": (within(f.a1, -5.020e-5, 0.05), f"{f.a1:.5g} vs -5.020e-5"),
        "1950 slower, |z| > 2": (r > 0 and abs(z) > 2, f"residual {r:+.3g}, z {z:.2f}"),
    })
    assert ok


def test_criterion_4_world_gdp(acceptance_line):
    gdp = load_bundled("world_gdp")
    f = fit_first_order(slice(gdp, 1000, 1955))
    rep = detect_divergence(gdp, (1000, 1955))
    order = [c.model.name for c in classify(slice(gdp, 1965, 2003)).ranking]
    ts = singularity_time(line_fit(1.716e-2, -8.671e-6))
    ok = report(acceptance_line, 4, {
        "a0 +-5%": (within(f.a0, 1.716e-2, 0.05), f"{f.a0:.5g} vs 1.716e-2"),
        "a1 +-5%": (within(f.a1, -8.671e-6, 0.05), f"{f.a1:.5g} vs -8.671e-6"),
        "divergence slower": (rep.direction is Direction.SLOWER, rep.direction.value),
        "onset in [1985, 2003]": (rep.onset is not None and 1985 <= rep.onset <= 2003,
                                  f"{rep.onset}"),
        "Exponential above Hyperbolic1": (order.index("Exponential") < order.index("Hyperbolic1"),
                                          " > ".join(order)),
        "singularity 1979.0 +- 0.5": (abs(ts - 1979.0) <= 0.5, f"{ts:.3f}"),
    })
    assert ok


def _recovery_cases(rng, count=100):
    for _ in range(count):
        n = int(rng.integers(3, 60))
        t = np.sort(rng.choice(np.arange(-500, 2100), n, replace=False)).astype(float)
        a1 = -10 ** rng.uniform(-6, -1)
        # put the singularity beyond the last sample so the series stays positive
        ts = t[-1] + (t[-1] - t[0]) * rng.uniform(0.05, 3)
        yield -a1 * ts, a1, t


def _property_recovery(rng):
    worst = 0.0
    for a0, a1, t in _recovery_cases(rng):
        f = fit_first_order(TimeSeries.from_arrays(t, 1 / (a0 + a1 * t)))
        worst = max(worst, abs(f.a0 - a0) / abs(a0), abs(f.a1 - a1) / abs(a1))
    return worst <= 1e-9, f"worst rel err {worst:.1e} over 100 cases"


def _property_scaling(rng):
    worst = 0.0
    for a0, a1, t in _recovery_cases(rng):
        s = 1 / (a0 + a1 * t) * np.exp(rng.normal(0, 0.05, len(t)))
        c = 10 ** rng.uniform(-3, 3)
        f = fit_first_order(TimeSeries.from_arrays(t, s))
        g = fit_first_order(TimeSeries.from_arrays(t, c * s))
        errs = [abs(g.a0 * c - f.a0) / abs(f.a0), abs(g.a1 * c - f.a1) / abs(f.a1)]
        if f.a1 < 0:
            errs.append(abs(singularity_time(g) - singularity_time(f)) / abs(singularity_time(f)))
        worst = max(worst, *errs)
    return worst <= 1e-9, f"worst rel err {worst:.1e}"


def _property_segmentation(rng):
    mismatches, cases = 0, 0
    for n in (12, 20, 30, 45, 60):
        for kind in range(3):
            t = np.sort(rng.choice(np.arange(1000, 2000), n, replace=False)).astype(float)
            k = n // 2
            y = np.where(np.arange(n) < k, 5 - 0.002 * (t - t[0]),
                         5 - 0.002 * (t[k] - t[0]) - 0.008 * (t - t[k]))
            y = np.abs(y) + 0.5
            if kind:
                y = y * np.exp(rng.normal(0, 0.02 * kind, n))
            s = TimeSeries.from_arrays(t, 1 / y)
            max_seg = 3 if n <= 30 else 2
            oracle, _, _ = enumerate_best(s, max_seg, 4)
            cases += 1
            if not math.isclose(fit_segmented(s, max_seg, 4).bic, oracle, rel_tol=1e-9,
                                abs_tol=1e-9):
                mismatches += 1
    return mismatches == 0, f"{cases - mismatches}/{cases} series match enumeration"


def _property_classifier():
    noiseless, noisy = {}, {}
    for fam in synth.FAMILIES:
        grid = synth.noiseless_grid(fam)
        noiseless[fam] = sum(classify(s).winner.model.name == fam for s in grid) / len(grid)
        noisy[fam] = sum(classify(s).winner.model.name == fam
                         for s in synth.noisy_trials(fam)) / 200
    ok = all(v == 1.0 for v in noiseless.values()) and all(v >= 0.9 for v in noisy.values())
    return ok, f"noiseless min {min(noiseless.values()):.0%}, noisy min {min(noisy.values()):.1%}"


def test_criterion_5_property_suite(acceptance_line):
    rng = np.random.default_rng(5)
    ok = report(acceptance_line, 5, {
        "recovery": _property_recovery(rng),
        "scaling": _property_scaling(rng),
        "segmentation oracle": _property_segmentation(rng),
        "classifier": _property_classifier(),
    })
    assert ok
