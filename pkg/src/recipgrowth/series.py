"""Time-series container, CSV ingestion and elementary transforms.

Years use astronomical numbering (1 BC is year 0, 2 BC is year -1) so that
arithmetic across the BC/AD boundary stays linear.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from importlib import resources
from typing import Iterable, Iterator

import numpy as np

from .errors import DatasetNotFoundError, DomainError, DuplicateYearError, ParseError

BUNDLED = ("world_population", "africa_population", "western_europe_gdp", "world_gdp")


@dataclass(frozen=True)
class TimePoint:
    t: float
    value: float

    def __post_init__(self):
        if not math.isfinite(self.t):
            raise ValueError(f"year must be finite, got {self.t!r}")
        if not (self.value > 0 and math.isfinite(self.value)):
            raise DomainError(f"value must be positive and finite, got {self.value!r}")


@dataclass(frozen=True)
class TimeSeries:
    """Ordered ``(year, value)`` samples with a unit label.

    Points are sorted by strictly increasing year. Instances are immutable;
    every transform returns a new series.
    """

    points: tuple[TimePoint, ...] = ()
    unit: str = ""
    label: str = ""
    meta: dict[str, str] = field(default_factory=dict, compare=False)

    def __post_init__(self):
        pts = tuple(self.points)
        object.__setattr__(self, "points", pts)
        for prev, cur in zip(pts, pts[1:]):
            if not cur.t > prev.t:
                raise ValueError(
                    f"points must have strictly increasing years ({prev.t} then {cur.t})"
                )

    @classmethod
    def from_arrays(cls, t: Iterable[float], values: Iterable[float], unit: str = "",
                    label: str = "") -> "TimeSeries":
        pts = [TimePoint(float(a), float(b)) for a, b in zip(t, values)]
        pts.sort(key=lambda p: p.t)
        return cls(tuple(pts), unit, label)

    def __len__(self) -> int:
        return len(self.points)

    def __iter__(self) -> Iterator[TimePoint]:
        return iter(self.points)

    @property
    def t(self) -> np.ndarray:
        return np.array([p.t for p in self.points], dtype=float)

    @property
    def values(self) -> np.ndarray:
        return np.array([p.value for p in self.points], dtype=float)

    @property
    def years(self) -> list[float]:
        return [p.t for p in self.points]

    def value_at(self, year: float) -> float:
        for p in self.points:
            if p.t == year:
                return p.value
        raise KeyError(year)

    def _derive(self, points, unit=None) -> "TimeSeries":
        return TimeSeries(tuple(points), self.unit if unit is None else unit, self.label,
                          dict(self.meta))


def _parse_number(field_text: str, what: str, lineno: int) -> float:
    try:
        x = float(field_text)
    except ValueError:
        raise ParseError(f"non-numeric {what} {field_text!r}", lineno) from None
    if not math.isfinite(x):
        raise ParseError(f"non-finite {what} {field_text!r}", lineno)
    return x


def parse_csv(text: str) -> TimeSeries:
    """Parse ``year,value`` rows into a :class:`TimeSeries`.

    Lines starting with ``#`` are comments; ``# key: value`` comments are kept
    as directives, and ``unit`` / ``label`` populate the series fields. A single
    ``year,value`` header line is accepted anywhere before the first data row.
    """
    meta: dict[str, str] = {}
    rows: list[tuple[float, float, int]] = []
    header_seen = False
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            body = line[1:].strip()
            key, sep, val = body.partition(":")
            if sep and key.strip() and " " not in key.strip():
                meta[key.strip().lower()] = val.strip()
            continue
        fields = [f.strip() for f in line.split(",")]
        if len(fields) != 2:
            raise ParseError(f"expected 2 fields, got {len(fields)}", lineno)
        if not rows and not header_seen and [f.lower() for f in fields] == ["year", "value"]:
            header_seen = True
            continue
        year = _parse_number(fields[0], "year", lineno)
        value = _parse_number(fields[1], "value", lineno)
        if value <= 0:
            raise DomainError(f"value must be positive, got {fields[1]}", lineno)
        rows.append((year, value, lineno))

    seen: dict[float, int] = {}
    for year, _, lineno in rows:
        if year in seen:
            raise DuplicateYearError(f"year {fields_fmt(year)} already given on line {seen[year]}",
                                     lineno)
        seen[year] = lineno
    rows.sort(key=lambda r: r[0])
    pts = tuple(TimePoint(y, v) for y, v, _ in rows)
    return TimeSeries(pts, meta.get("unit", ""), meta.get("label", ""), meta)


def fields_fmt(year: float) -> str:
    return str(int(year)) if float(year).is_integer() else repr(year)


def read_csv(path) -> TimeSeries:
    with open(path, encoding="utf-8") as fh:
        return parse_csv(fh.read())


def load_bundled(name: str) -> TimeSeries:
    if name not in BUNDLED:
        raise DatasetNotFoundError(
            f"unknown dataset {name!r}; valid names: {', '.join(BUNDLED)}"
        )
    text = resources.files(__package__).joinpath("data").joinpath(f"{name}.csv").read_text("utf-8")
    return parse_csv(text)


def reciprocal(series: TimeSeries) -> TimeSeries:
    pts = [TimePoint(p.t, 1.0 / p.value) for p in series.points]
    unit = f"1/({series.unit})" if series.unit else ""
    return series._derive(pts, unit)


def slice(series: TimeSeries, t_min: float, t_max: float) -> TimeSeries:  # noqa: A001
    if t_min > t_max:
        raise ValueError(f"t_min ({t_min}) must not exceed t_max ({t_max})")
    return series._derive(p for p in series.points if t_min <= p.t <= t_max)


def exclude(series: TimeSeries, years: Iterable[float]) -> TimeSeries:
    drop = set(years)
    if not drop:
        return series
    return series._derive(p for p in series.points if p.t not in drop)
