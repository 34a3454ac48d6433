from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from intervalsel.geometry import (
    Domain,
    IndependentSet,
    ParseError,
    Scalar,
    ScalarOverflowError,
    UnitInterval,
    alpha,
    contained_in,
    format_intervals,
    further_left,
    further_right,
    intersects,
    max_independent_set,
    parse_intervals,
)
from intervalsel.rng import SplitMix64

from brute import brute_force_alpha, random_intervals

u = UnitInterval.at

small_rational = st.fractions(
    min_value=Fraction(-1000), max_value=Fraction(1000), max_denominator=1 << 16
)


class TestScalar:
    def test_reduction_and_sign(self):
        assert Scalar(2, 4) == Scalar(1, 2)
        assert Scalar(3, -6) == Scalar(-1, 2)
        assert str(Scalar(-4, 2)) == "-2"

    def test_zero_denominator(self):
        with pytest.raises(ZeroDivisionError):
            Scalar(1, 0)

    def test_parse(self):
        assert Scalar.parse("0.25") == Scalar(1, 4)
        assert Scalar.parse("1/4") == Scalar(1, 4)
        assert Scalar.parse("-3") == Scalar(-3)
        assert Scalar.parse("2.5") == Scalar(5, 2)
        with pytest.raises(ParseError):
            Scalar.parse("nope")

    def test_overflow_is_an_error(self):
        big = Scalar((1 << 62) + 1, 1)
        with pytest.raises(ScalarOverflowError):
            big + big
        with pytest.raises(ScalarOverflowError):
            big * Scalar(3)
        with pytest.raises(ScalarOverflowError):
            Scalar(1, (1 << 62) + 1) + Scalar(1, (1 << 62) - 1)
        with pytest.raises(ScalarOverflowError):
            Scalar(1 << 63, 1)

    def test_floor(self):
        assert Scalar(7, 2).floor() == 3
        assert Scalar(-1, 2).floor() == -1
        assert Scalar(4).floor() == 4

    @given(x=small_rational, y=small_rational)
    def test_add_sub_round_trip(self, x, y):
        sx, sy = Scalar(x.numerator, x.denominator), Scalar(y.numerator, y.denominator)
        assert (sx + sy) - sy == sx

    @given(x=small_rational, y=small_rational)
    def test_ordering_matches_fractions(self, x, y):
        sx, sy = Scalar(x.numerator, x.denominator), Scalar(y.numerator, y.denominator)
        assert (sx < sy) == (x < y)
        assert (sx == sy) == (x == y)


class TestPredicates:
    def test_intersects_examples(self):
        assert intersects(u(0), u(1))  # shared endpoint of closed intervals
        assert not intersects(u(0), u("3/2"))
        assert intersects(u(0), u(0))

    def test_further_left_examples(self):
        assert further_left(u(0), u("1/2"))
        assert not further_left(u("1/2"), u("1/2"))
        assert not further_left(u(1), u(0))
        assert further_right(u(1), u(0))

    def test_contained_in_examples(self):
        assert contained_in(u("3/10"), Domain(0, 2))
        assert not contained_in(u(0), Domain(0, 1))  # no unit interval fits
        assert not contained_in(u(1), Domain(0, 2))  # right boundary open

    @given(x=small_rational, y=small_rational)
    def test_intersects_symmetric(self, x, y):
        a, b = u(x), u(y)
        assert intersects(a, b) == intersects(b, a)
        assert not (further_left(a, b) and further_left(b, a))

    @given(x=small_rational, y=small_rational)
    def test_intersection_is_left_distance(self, x, y):
        a, b = u(x), u(y)
        assert intersects(a, b) == (abs(x - y) <= 1)


class TestDomain:
    def test_empty_domain_rejected(self):
        with pytest.raises(ValueError):
            Domain(0, 0)
        with pytest.raises(ValueError):
            Domain(3, 1)

    def test_split_points(self):
        assert list(Domain(-1, 7).split_points()) == [0, 1, 2, 3, 4, 5, 6]
        assert list(Domain(0, 1).split_points()) == []


class TestIndependentSet:
    def test_sorted_canonical(self):
        s = IndependentSet([u(4), u(0), u(2)])
        assert [str(iv.left) for iv in s] == ["0", "2", "4"]

    def test_rejects_conflict(self):
        with pytest.raises(ValueError):
            IndependentSet([u(0), u("1/2")])
        with pytest.raises(ValueError):
            IndependentSet([u(0), u(1)])  # touching endpoints conflict


class TestOracle:
    def test_trivial_cases(self):
        assert len(max_independent_set([])) == 0
        assert alpha([u(0), u("1/2"), u(2)]) == 2

    def test_deterministic_choice(self):
        chosen = max_independent_set([u("1/2"), u(0), u(2)])
        assert [str(iv.left) for iv in chosen] == ["0", "2"]

    def test_gadget_instance_has_alpha_three(self):
        from intervalsel.gadget import build

        g = build(4, 2, [1, 0, 1, 0], [0, 1, 0, 1], [0, 1, 2, 3, 4, 5])
        assert alpha(list(g.clique) + [g.wing_left, g.wing_right]) == 3

    def test_matches_brute_force(self):
        rng = SplitMix64(1234)
        for _ in range(300):
            n = rng.below(11)
            intervals = random_intervals(rng, 2 + rng.below(5), n)
            assert len(max_independent_set(intervals)) == brute_force_alpha(intervals)


class TestTextFormat:
    def test_parse_and_comments(self):
        text = "# header\n0.25\n\n1/4\n3\n"
        got = parse_intervals(text)
        assert [str(iv.left) for iv in got] == ["1/4", "1/4", "3"]

    def test_bad_line_reports_position(self):
        with pytest.raises(ParseError, match="line 2"):
            parse_intervals("1\nwhat\n")

    def test_round_trip(self):
        intervals = [u("1/4"), u(3), u("-7/2")]
        again = parse_intervals(format_intervals(intervals))
        assert [iv.left for iv in again] == [iv.left for iv in intervals]
