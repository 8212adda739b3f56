import pytest
from hypothesis import given, strategies as st

from recipgrowth import (DatasetNotFoundError, DomainError, DuplicateYearError, ParseError,
                         TimeSeries, exclude, load_bundled, parse_csv, reciprocal, slice)
from recipgrowth.series import BUNDLED


def test_parse_two_points():
    s = parse_csv("1000,0.268\n1500,0.438")
    assert s.years == [1000, 1500]
    assert list(s.values) == [0.268, 0.438]


def test_parse_unit_directive():
    s = parse_csv("# unit: billions\n1820,1.042")
    assert len(s) == 1
    assert s.unit == "billions"


def test_parse_header_comments_and_blank_lines():
    s = parse_csv("# label: demo\n\nyear,value\n# a comment\n-50,2\n1,3\n")
    assert s.label == "demo"
    assert s.years == [-50, 1]
    assert s.unit == ""


def test_parse_sorts_by_year():
    assert parse_csv("1900,2\n1800,1").years == [1800, 1900]


@pytest.mark.parametrize("text, line, exc", [
    ("1820,abc", 1, ParseError),
    ("# x\n1820,1\nabc,2", 3, ParseError),
    ("1820,1,2", 1, ParseError),
    ("1820,0", 1, DomainError),
    ("1820,1\n1900,-3", 2, DomainError),
    ("1820,1\n1820,2", 2, DuplicateYearError),
])
def test_parse_errors_carry_line_numbers(text, line, exc):
    with pytest.raises(exc) as info:
        parse_csv(text)
    assert info.value.line == line
    assert f"line {line}" in str(info.value)


def test_constructor_rejects_unsorted():
    with pytest.raises(ValueError):
        TimeSeries.from_arrays([1, 1], [1, 2])


@pytest.mark.parametrize("name", BUNDLED)
def test_bundled_provenance(name):
    s = load_bundled(name)
    assert len(s) > 5
    assert s.unit
    assert s.meta["source"]
    assert s.meta["scale"]


def test_world_gdp_unit():
    assert load_bundled("world_gdp").unit == "billions of 1990 International Geary-Khamis dollars"


def test_world_population_span():
    s = load_bundled("world_population")
    assert s.years[0] <= 1000 and s.years[-1] >= 1950


def test_unknown_dataset_lists_valid_names():
    with pytest.raises(DatasetNotFoundError) as info:
        load_bundled("moon_gdp")
    for name in BUNDLED:
        assert name in str(info.value)


def test_reciprocal_examples():
    r = reciprocal(TimeSeries.from_arrays([1000], [0.25], unit="billions"))
    assert r.years == [1000] and r.values[0] == 4.0
    assert r.unit == "1/(billions)"
    assert len(reciprocal(TimeSeries())) == 0


def test_slice_examples():
    s = TimeSeries.from_arrays(range(1650, 1851), [1.0 + i for i in range(201)])
    assert slice(s, 1650, 1850) == s
    part = slice(s, 1700, 1800)
    assert part.years[0] == 1700 and part.years[-1] == 1800 and len(part) == 101
    assert len(slice(s, 0, 10)) == 0
    with pytest.raises(ValueError):
        slice(s, 1800, 1700)


def test_exclude_examples():
    wp = load_bundled("world_population")
    assert 1 not in exclude(wp, {1}).years
    assert len(exclude(wp, {1})) == len(wp) - 1
    assert exclude(wp, set()) == wp
    assert exclude(wp, {9999}) == wp


years = st.lists(st.integers(-3000, 2100), min_size=1, max_size=30, unique=True)
positive = st.floats(1e-6, 1e6, allow_nan=False)


@st.composite
def series_st(draw):
    ys = sorted(draw(years))
    vs = [draw(positive) for _ in ys]
    return TimeSeries.from_arrays(ys, vs, unit="u")


@given(series_st())
def test_reciprocal_is_involution(s):
    back = reciprocal(reciprocal(s))
    assert back.years == s.years
    for a, b in zip(back.values, s.values):
        assert abs(a - b) <= 1e-12 * b


@given(series_st(), st.lists(st.floats(0.0, 5.0), min_size=30, max_size=30))
def test_reciprocal_reverses_order(b, bumps):
    a = TimeSeries.from_arrays(b.t, [v * (1 + d) for v, d in zip(b.values, bumps)])
    for ra, rb in zip(reciprocal(a).values, reciprocal(b).values):
        assert ra <= rb


@given(series_st(), st.integers(-3000, 2100), st.integers(0, 3000), st.sets(st.integers(-3000, 2100)))
def test_slice_and_exclude_preserve_order_and_values(s, lo, width, drop):
    original = dict(zip(s.years, s.values))
    for sub in (slice(s, lo, lo + width), exclude(s, drop)):
        assert sub.years == sorted(sub.years)
        assert all(original[p.t] == p.value for p in sub)
