"""JSON reports, case-study pipelines and the CSV series writer.

Every number in a report is emitted as ``{"value": ..., "unit": ...}`` and the
document carries ``schema_version``.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from importlib import resources

from .diverge import DivergenceParams, DivergenceReport, detect_divergence
from .errors import DatasetNotFoundError
from .fit import FitOptions, HyperbolicFit, fit_first_order, line_fit, singularity_time
from .modelzoo import ClassificationResult, classify
from .segment import SegmentedFit, acceleration_ratio, fit_segmented
from .series import TimeSeries, exclude, load_bundled, slice as slice_series

SCHEMA_VERSION = 1


def q(value, unit: str):
    """A number tagged with its unit; non-finite values become ``None``."""
    if value is None:
        return None
    value = float(value) if not isinstance(value, (int, bool)) else value
    if isinstance(value, float) and not math.isfinite(value):
        return {"value": None, "unit": unit}
    return {"value": value, "unit": unit}


def _recip_unit(unit: str) -> str:
    return f"1/({unit})" if unit else "1/(value)"


def fit_to_dict(fit: HyperbolicFit) -> dict:
    ru = _recip_unit(fit.unit)
    vu = fit.unit or "value"
    return {
        "a0": q(fit.a0, ru),
        "a1": q(fit.a1, f"{ru} per year"),
        "window": [q(fit.window[0], "year"), q(fit.window[1], "year")],
        "n": q(fit.n, "points"),
        "rmse_recip": q(fit.rmse_recip, ru),
        "r2_recip": q(fit.r2_recip, "dimensionless"),
        "rmse_direct": q(fit.rmse_direct, vu),
        "singularity": q(singularity_time(fit), "year"),
        "weighting": fit.weighting.value,
    }


def segmented_to_dict(seg: SegmentedFit) -> dict:
    ru = _recip_unit(seg.segments[0].unit)
    return {
        "breakpoints": [q(b, "year") for b in seg.breakpoints],
        "segments": [fit_to_dict(s) for s in seg.segments],
        "acceleration_ratios": [q(acceleration_ratio(seg, i), "dimensionless")
                                for i in range(seg.n_segments - 1)
                                if seg.segments[i].a1 and seg.segments[i + 1].a1],
        "sse_recip": q(seg.sse_recip, f"({ru})^2"),
        "bic": q(seg.bic, "dimensionless"),
    }


def divergence_to_dict(rep: DivergenceReport) -> dict:
    return {
        "direction": rep.direction.value,
        "onset": q(rep.onset, "year"),
        "run_length": q(rep.run_length, "points"),
        "max_z": q(rep.max_z, "baseline rmse"),
        "baseline": fit_to_dict(rep.baseline),
        "z_scores": [{"t": q(t, "year"), "z": q(z, "baseline rmse")} for t, z in rep.z_scores],
    }


def _params_to_dict(params: dict) -> dict:
    out = {}
    for k, v in params.items():
        if isinstance(v, bool):
            out[k] = v
        elif isinstance(v, list):
            out[k] = [q(c, "coefficient") for c in v]
        else:
            out[k] = q(v, "parameter")
    return out


def classification_to_dict(res: ClassificationResult) -> dict:
    return {
        "winner": res.winner.model.name,
        "ranking": [{"model": c.model.name,
                     "bic": q(c.bic, "dimensionless"),
                     "n_params": q(c.n_params, "parameters"),
                     "sse_recip": q(c.sse_recip, "(reciprocal unit)^2"),
                     "params": _params_to_dict(c.params)} for c in res.ranking],
    }


def envelope(kind: str, inputs: dict, results: dict, checks: list | None = None) -> dict:
    doc = {"schema_version": SCHEMA_VERSION, "kind": kind, "inputs": inputs, "results": results}
    if checks is not None:
        doc["checks"] = checks
        doc["pass"] = all(c["pass"] for c in checks)
    return doc


def dumps(doc: dict) -> str:
    return json.dumps(doc, indent=2, allow_nan=False)


def serialize_series(series: TimeSeries) -> str:
    """CSV text that :func:`recipgrowth.series.parse_csv` reads back to the same points."""
    lines = []
    if series.label:
        lines.append(f"# label: {series.label}")
    if series.unit:
        lines.append(f"# unit: {series.unit}")
    lines.append("year,value")
    lines.extend(f"{p.t!r},{p.value!r}" for p in series.points)
    return "\n".join(lines) + "\n"


# -- case studies -------------------------------------------------------------


@dataclass(frozen=True)
class CaseStudy:
    name: str
    dataset: str
    description: str
    exclude: tuple[float, ...]
    plan: dict = field(default_factory=dict)
    expect: dict = field(default_factory=dict)

    @property
    def fit_window(self):
        step = self.plan.get("fit") or self.plan.get("segment")
        return tuple(step["window"]) if step else None


def case_studies() -> dict[str, CaseStudy]:
    raw = json.loads(resources.files(__package__).joinpath("data")
                     .joinpath("case_studies.json").read_text("utf-8"))
    out = {}
    for name, entry in raw.items():
        plan = {k: entry[k] for k in ("fit", "segment", "diverge", "classify", "flag_points")
                if k in entry}
        out[name] = CaseStudy(name, entry["dataset"], entry.get("description", ""),
                              tuple(entry.get("exclude", ())), plan, entry.get("expect", {}))
    return out


def _rel_check(name: str, observed: float, target_tol, unit: str) -> dict:
    target, tol = target_tol
    ok = abs(observed - target) <= tol * abs(target)
    return {"name": name, "observed": q(observed, unit), "expected": q(target, unit),
            "tolerance": q(tol, "relative"), "pass": bool(ok)}


def _range_check(name: str, observed, bounds, unit: str) -> dict:
    lo, hi = bounds
    ok = observed is not None and lo <= observed <= hi
    return {"name": name, "observed": q(observed, unit),
            "expected_range": [q(lo, unit), q(hi, unit)], "pass": bool(ok)}


def _fit_checks(prefix: str, fit: HyperbolicFit, expect: dict) -> list[dict]:
    ru = _recip_unit(fit.unit)
    return [_rel_check(f"{prefix}.a0", fit.a0, expect["a0"], ru),
            _rel_check(f"{prefix}.a1", fit.a1, expect["a1"], f"{ru} per year")]


def run_case_study(name: str) -> dict:
    """Run one bundled case study and return its report with pass/fail checks."""
    cases = case_studies()
    if name not in cases:
        raise DatasetNotFoundError(
            f"unknown case study {name!r}; valid names: {', '.join(cases)}"
        )
    case = cases[name]
    full = load_bundled(case.dataset)
    series = exclude(full, case.exclude)
    plan, expect = case.plan, case.expect
    results: dict = {}
    checks: list[dict] = []

    fit = None
    if "fit" in plan:
        fit = fit_first_order(slice_series(series, *plan["fit"]["window"]))
        results["fit"] = fit_to_dict(fit)
        if "fit" in expect:
            checks += _fit_checks("fit", fit, expect["fit"])

    if "segment" in plan:
        sp = plan["segment"]
        seg = fit_segmented(slice_series(series, *sp["window"]), sp["max_segments"],
                            sp["min_pts"])
        results["segmented"] = segmented_to_dict(seg)
        if "segments" in expect:
            ok = seg.n_segments == len(expect["segments"])
            checks.append({"name": "segments.count", "observed": q(seg.n_segments, "segments"),
                           "expected": q(len(expect["segments"]), "segments"), "pass": ok})
            if ok:
                for i, (s, e) in enumerate(zip(seg.segments, expect["segments"])):
                    checks += _fit_checks(f"segments[{i}]", s, e)
                checks.append(_range_check("breakpoint", seg.breakpoints[0],
                                           expect["breakpoint"], "year"))
                checks.append(_range_check("acceleration_ratio", acceleration_ratio(seg, 0),
                                           expect["acceleration_ratio"], "dimensionless"))

    if "diverge" in plan:
        dp = plan["diverge"]
        rep = detect_divergence(full, tuple(dp["baseline"]),
                                DivergenceParams(dp["z_threshold"], dp["min_run"]))
        results["divergence"] = divergence_to_dict(rep)
        if "divergence" in expect:
            e = expect["divergence"]
            checks.append({"name": "divergence.direction", "observed": rep.direction.value,
                           "expected": e["direction"],
                           "pass": rep.direction.value == e["direction"]})
            checks.append(_range_check("divergence.onset", rep.onset, e["onset"], "year"))

    if "flag_points" in plan and fit is not None:
        flagged = {}
        for year in plan["flag_points"]:
            r = 1.0 / full.value_at(year) - (fit.a0 + fit.a1 * year)
            z = r / fit.rmse_recip
            direction = "slower" if r > 0 else "faster"
            flagged[str(year)] = {"residual": q(r, _recip_unit(full.unit)),
                                  "z": q(z, "fit rmse"), "direction": direction}
            e = expect.get("flagged", {}).get(str(year))
            if e:
                checks.append({"name": f"flagged[{year}]", "observed": flagged[str(year)],
                               "expected": {"direction": e["direction"],
                                            "min_abs_z": q(e["min_abs_z"], "fit rmse")},
                               "pass": direction == e["direction"] and abs(z) > e["min_abs_z"]})
        results["flagged"] = flagged

    if "classify" in plan:
        cp = plan["classify"]
        res = classify(slice_series(full, *cp["window"]), cp["max_poly_degree"])
        results["classification"] = classification_to_dict(res)
        if "ranks_above" in expect:
            better, worse = expect["ranks_above"]
            order = [c.model.name for c in res.ranking]
            ok = better in order and worse in order and order.index(better) < order.index(worse)
            checks.append({"name": f"classification.{better}_above_{worse}",
                           "observed": order, "pass": ok})

    if "printed_singularity" in expect:
        ps = expect["printed_singularity"]
        ts = singularity_time(line_fit(ps["a0"], ps["a1"]))
        results["printed_singularity"] = q(ts, "year")
        checks.append(_range_check("printed_singularity", ts, ps["year"], "year"))
    if fit is not None:
        results["singularity"] = q(singularity_time(fit), "year")

    inputs = {"case": name, "dataset": case.dataset, "unit": full.unit,
              "source": full.meta.get("source", ""),
              "exclude": [q(y, "year") for y in case.exclude],
              "plan": plan, "options": {"weighting": FitOptions().weighting.value}}
    return envelope("case_study", inputs, results, checks)
