"""Exact interval primitives and the offline independent-set oracle.

Coordinates are reduced rationals confined to the signed 64-bit range.
Arithmetic that would leave that range raises instead of wrapping or
silently falling back to floats, so every geometric predicate in this
package is exact by construction.

All values here are immutable after construction and safe to share
between threads; the module functions are pure.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence, Union

I64_MIN = -(1 << 63)
I64_MAX = (1 << 63) - 1


class ScalarOverflowError(ArithmeticError):
    """A rational result left the signed 64-bit numerator/denominator range."""


class ParseError(ValueError):
    """Malformed coordinate or interval text."""


ScalarLike = Union["Scalar", int, str, Fraction]


class Scalar:
    """A reduced rational with 64-bit numerator and positive 64-bit denominator.

    Always stored with gcd(|num|, den) = 1 and den > 0.  Results of +, -, *
    are range-checked; comparisons are exact (intermediate cross products are
    computed with Python integers and never stored).
    """

    __slots__ = ("num", "den")

    def __init__(self, num: int, den: int = 1):
        if den == 0:
            raise ZeroDivisionError("scalar with zero denominator")
        if den < 0:
            num, den = -num, -den
        g = math.gcd(num, den)
        if g > 1:
            num //= g
            den //= g
        if not (I64_MIN <= num <= I64_MAX) or den > I64_MAX:
            raise ScalarOverflowError(f"{num}/{den} outside the 64-bit range")
        object.__setattr__(self, "num", num)
        object.__setattr__(self, "den", den)

    def __setattr__(self, name, value):
        raise AttributeError("Scalar is immutable")

    def __reduce__(self):
        return (Scalar, (self.num, self.den))

    @classmethod
    def coerce(cls, value: ScalarLike) -> "Scalar":
        if isinstance(value, Scalar):
            return value
        if isinstance(value, int):
            return cls(value)
        if isinstance(value, Fraction):
            return cls(value.numerator, value.denominator)
        if isinstance(value, str):
            return cls.parse(value)
        raise TypeError(f"cannot interpret {value!r} as an exact coordinate")

    @classmethod
    def parse(cls, text: str) -> "Scalar":
        """Parse ``"3"``, ``"1/4"`` or a decimal like ``"0.25"`` exactly.

        Decimals are read as base-10 rationals (0.25 -> 1/4), never as
        binary floats.
        """
        try:
            frac = Fraction(text.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise ParseError(f"bad coordinate {text!r}: {exc}") from None
        return cls(frac.numerator, frac.denominator)

    def as_fraction(self) -> Fraction:
        return Fraction(self.num, self.den)

    def floor(self) -> int:
        return self.num // self.den

    def __add__(self, other: ScalarLike) -> "Scalar":
        o = Scalar.coerce(other)
        return Scalar(self.num * o.den + o.num * self.den, self.den * o.den)

    def __radd__(self, other: ScalarLike) -> "Scalar":
        return self.__add__(other)

    def __sub__(self, other: ScalarLike) -> "Scalar":
        o = Scalar.coerce(other)
        return Scalar(self.num * o.den - o.num * self.den, self.den * o.den)

    def __rsub__(self, other: ScalarLike) -> "Scalar":
        return Scalar.coerce(other).__sub__(self)

    def __mul__(self, other: ScalarLike) -> "Scalar":
        o = Scalar.coerce(other)
        return Scalar(self.num * o.num, self.den * o.den)

    def __rmul__(self, other: ScalarLike) -> "Scalar":
        return self.__mul__(other)

    def __neg__(self) -> "Scalar":
        return Scalar(-self.num, self.den)

    def __abs__(self) -> "Scalar":
        return Scalar(abs(self.num), self.den)

    def __eq__(self, other) -> bool:
        if isinstance(other, Scalar):
            return self.num == other.num and self.den == other.den
        if isinstance(other, int):
            return self.den == 1 and self.num == other
        if isinstance(other, Fraction):
            return self.num == other.numerator and self.den == other.denominator
        return NotImplemented

    def __lt__(self, other) -> bool:
        o = Scalar.coerce(other)
        return self.num * o.den < o.num * self.den

    def __le__(self, other) -> bool:
        o = Scalar.coerce(other)
        return self.num * o.den <= o.num * self.den

    def __gt__(self, other) -> bool:
        o = Scalar.coerce(other)
        return self.num * o.den > o.num * self.den

    def __ge__(self, other) -> bool:
        o = Scalar.coerce(other)
        return self.num * o.den >= o.num * self.den

    def __hash__(self) -> int:
        return hash((self.num, self.den))

    def __float__(self) -> float:
        return self.num / self.den

    def __str__(self) -> str:
        return str(self.num) if self.den == 1 else f"{self.num}/{self.den}"

    def __repr__(self) -> str:
        return f"Scalar({self.num}, {self.den})"


ZERO = Scalar(0)
ONE = Scalar(1)


@dataclass(frozen=True, slots=True)
class UnitInterval:
    """Closed interval [left, left + 1] with an optional provenance label.

    The right endpoint is implicit: unit length is a construction invariant,
    not a stored field that could drift.
    """

    left: Scalar
    label: str | None = None

    @classmethod
    def at(cls, left: ScalarLike, label: str | None = None) -> "UnitInterval":
        return cls(Scalar.coerce(left), label)

    @property
    def right(self) -> Scalar:
        return self.left + ONE

    def translate(self, offset: ScalarLike) -> "UnitInterval":
        return UnitInterval(self.left + offset, self.label)

    def __str__(self) -> str:
        return f"[{self.left}, {self.right}]"


@dataclass(frozen=True, slots=True)
class Domain:
    """Half-open integer domain [a, b)."""

    a: int
    b: int

    def __post_init__(self):
        if self.a >= self.b:
            raise ValueError(f"domain [{self.a}, {self.b}) requires a < b")

    @property
    def length(self) -> int:
        return self.b - self.a

    def split_points(self) -> range:
        return range(self.a + 1, self.b)

    def __str__(self) -> str:
        return f"[{self.a}, {self.b})"


def intersects(i: UnitInterval, j: UnitInterval) -> bool:
    """True iff the closed intervals share a point: |i.left - j.left| <= 1.

    Touching endpoints count as intersecting; [0,1] and [1,2] conflict.
    """
    il, jl = i.left, j.left
    diff = il.num * jl.den - jl.num * il.den
    return abs(diff) <= il.den * jl.den


def independent(i: UnitInterval, j: UnitInterval) -> bool:
    return not intersects(i, j)


def further_left(i: UnitInterval, j: UnitInterval) -> bool:
    """Strictly smaller left endpoint; the mirror test is further_right."""
    return i.left < j.left


def further_right(i: UnitInterval, j: UnitInterval) -> bool:
    return i.left > j.left


def contained_in(i: UnitInterval, d: Domain) -> bool:
    """True iff [left, left+1] lies inside [a, b): a <= left and left + 1 < b.

    The right boundary is open, so no unit interval fits a length-1 domain.
    """
    left = i.left
    return left.num >= d.a * left.den and left.num + left.den < d.b * left.den


class IndependentSet:
    """A pairwise-independent set of unit intervals, sorted by left endpoint.

    Construction validates independence; for unit intervals sorted by left
    endpoint this reduces to checking consecutive pairs.
    """

    __slots__ = ("intervals",)

    def __init__(self, intervals: Iterable[UnitInterval] = ()):
        items = sorted(intervals, key=lambda iv: iv.left)
        for prev, cur in zip(items, items[1:]):
            if intersects(prev, cur):
                raise ValueError(f"intervals {prev} and {cur} intersect")
        object.__setattr__(self, "intervals", tuple(items))

    def __setattr__(self, name, value):
        raise AttributeError("IndependentSet is immutable")

    def __reduce__(self):
        return (IndependentSet, (list(self.intervals),))

    def __len__(self) -> int:
        return len(self.intervals)

    def __iter__(self):
        return iter(self.intervals)

    def __getitem__(self, idx):
        return self.intervals[idx]

    def __eq__(self, other) -> bool:
        if isinstance(other, IndependentSet):
            return [iv.left for iv in self] == [iv.left for iv in other]
        return NotImplemented

    def __hash__(self):
        return hash(tuple(iv.left for iv in self.intervals))

    def __repr__(self) -> str:
        return f"IndependentSet({', '.join(str(iv) for iv in self)})"


def max_independent_set(intervals: Sequence[UnitInterval]) -> IndependentSet:
    """Largest independent subset via the earliest-right-endpoint greedy sweep.

    Deterministic: sort by right endpoint, ties by left endpoint, then by
    arrival index; accept an interval only if it is strictly independent of
    the last one chosen.  For intervals the greedy sweep is exactly optimal.
    """
    order = sorted(enumerate(intervals), key=lambda pair: (pair[1].left, pair[0]))
    chosen: list[UnitInterval] = []
    for _, iv in order:
        if not chosen or independent(chosen[-1], iv):
            chosen.append(iv)
    return IndependentSet(chosen)


def alpha(intervals: Sequence[UnitInterval]) -> int:
    """Maximum independent-set size of the instance."""
    return len(max_independent_set(intervals))


# --- interval text format -------------------------------------------------
#
# One interval per line, identified by its left endpoint: a decimal
# ("0.25"), a rational ("1/4") or an integer.  Lines starting with '#'
# and blank lines are ignored.  Shared by every CLI subcommand.


def parse_intervals(text: str) -> list[UnitInterval]:
    intervals = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        try:
            left = Scalar.parse(line)
        except ParseError as exc:
            raise ParseError(f"line {lineno}: {exc}") from None
        intervals.append(UnitInterval(left))
    return intervals


def format_intervals(intervals: Iterable[UnitInterval]) -> str:
    return "\n".join(str(iv.left) for iv in intervals)
