from fractions import Fraction as F

import pytest
from hypothesis import given, strategies as st

from ordperm.errors import ParseError
from ordperm.intervals import Interval, IntervalSet, fmt_rat, parse_interval_set, parse_rat, relate


def S(*parts):
    return IntervalSet(parts)


def test_union_examples():
    assert S((0, 1)).union(S()) == S((0, 1))
    # open intervals sharing an endpoint stay separate
    assert S((0, 1)).union(S((1, 2))).parts == (Interval(0, 1), Interval(1, 2))
    u = S((0, 2)).union(S((1, 3)))
    assert u == S((0, 3))
    grid = [F(k, 4) for k in range(13)]
    for x in grid:
        assert u.contains(x) == (S((0, 2)).contains(x) or S((1, 3)).contains(x))


def test_contains_examples():
    assert S((0, 1)).contains(F(1, 2))
    assert not S((0, 1)).contains(0)
    assert not S((0, 1), (2, 3)).contains(F(3, 2))


def test_relate_examples():
    assert relate(S((0, 1)), S((2, 3))) == "disjoint"
    assert relate(S((0, 1)), S((0, 1))) == "equal"
    assert S((0, 2)).intersection(S((1, 3))) == S((1, 2))
    assert relate(S((0, 2)), S((1, 3))) == "overlapping"
    assert relate(S((1, 2)), S((0, 3))) == "subset"
    assert relate(S((0, 3)), S((1, 2))) == "superset"


def test_infinite_ends():
    line = IntervalSet.line()
    assert line.contains(F(-10 ** 9)) and line.contains(F(10 ** 9))
    assert S((None, 0)).union(S((0, None))).complement() == S()
    assert str(S((None, 0), (1, None))) == "(-inf,0)∪(1,+inf)"


def test_empty_interval_rejected():
    with pytest.raises(ValueError):
        Interval(1, 1)


def test_rat_text():
    assert fmt_rat(F(3)) == "3"
    assert fmt_rat(F(-2, 6)) == "-1/3"
    assert parse_rat("-1/3") == F(-1, 3)
    for bad in ("1/0", "2/4", "+1", "01", "1.5", ""):
        with pytest.raises(ParseError):
            parse_rat(bad)


def test_interval_text_roundtrip():
    s = S((None, F(-1, 2)), (0, 1), (1, F(7, 3)))
    assert parse_interval_set(str(s)) == s
    assert parse_interval_set(str(S())) == S()
    with pytest.raises(ParseError):
        parse_interval_set("(0,1)∪(1,")


# -- Boolean-algebra laws against a pointwise oracle --------------------------------

rats = st.fractions(min_value=-6, max_value=6, max_denominator=4)


@st.composite
def isets(draw):
    pts = sorted(set(draw(st.lists(rats, max_size=6))))
    parts = []
    for a, b in zip(pts[::2], pts[1::2]):
        parts.append((a, b))
    return IntervalSet(parts)


def probe_points(*sets):
    pts = {F(0)}
    for s in sets:
        for e in s.endpoints():
            pts.update({e, e - F(1, 97), e + F(1, 97)})
    return sorted(pts)


BOUND = Interval(-7, 7)


@given(isets(), isets(), isets())
def test_boolean_laws_pointwise(a, b, c):
    assert a.union(b) == b.union(a)
    assert a.union(a) == a
    assert a.union(b).union(c) == a.union(b.union(c))
    assert a.intersection(b.union(c)) == a.intersection(b).union(a.intersection(c))
    for x in probe_points(a, b, c):
        assert a.union(b).contains(x) == (a.contains(x) or b.contains(x))
        assert a.intersection(b).contains(x) == (a.contains(x) and b.contains(x))
        # De Morgan inside the bound, away from endpoints (complements are interiors)
        if x in BOUND and x not in a.endpoints() and x not in b.endpoints():
            lhs = a.union(b).complement(BOUND).contains(x)
            rhs = a.complement(BOUND).intersection(b.complement(BOUND)).contains(x)
            assert lhs == rhs == (not (a.contains(x) or b.contains(x)))


@given(isets(), isets())
def test_canonical_form_unique(a, b):
    same = all(a.contains(x) == b.contains(x) for x in probe_points(a, b))
    # sets built from endpoint pairs: pointwise equality off endpoints plus equal endpoint sets
    if same and a.endpoints() == b.endpoints():
        assert a == b and a.parts == b.parts
    assert relate(a, b) == "disjoint" or a.intersection(b)
