"""
Exact rationals, open intervals and finite unions of open intervals.

Rationals are ``fractions.Fraction`` values, which are always stored in
lowest terms with a positive denominator. An infinite endpoint is ``None``:
``Interval(None, 3)`` is the ray of all rationals below 3.

Set difference and complement return the *interior* of the point-set
result (``a - b`` is ``a`` minus the closure of ``b``), which keeps the
family of finite unions of open intervals closed under every operation.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Iterator, Optional

from .errors import ParseError

Rat = Fraction
Endpoint = Optional[Fraction]

_RAT_RE = re.compile(r"-?(0|[1-9][0-9]*)(/[1-9][0-9]*)?")


def rat(value) -> Fraction:
    """Coerce ints, Fractions and "p/q" strings to a Fraction."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return parse_rat(value)
    raise TypeError(f"not an exact rational: {value!r}")


def fmt_rat(q: Fraction) -> str:
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


def parse_rat(text: str) -> Fraction:
    """Parse the canonical "p/q" form; non-canonical spellings are rejected."""
    text = text.strip()
    if not _RAT_RE.fullmatch(text) or text == "-0":
        raise ParseError(f"malformed rational {text!r}")
    num, _, den = text.partition("/")
    q = Fraction(int(num), int(den) if den else 1)
    if den and (q.denominator != int(den) or int(den) == 1):
        raise ParseError(f"rational {text!r} is not in lowest terms")
    return q


def midpoint(a: Fraction, b: Fraction) -> Fraction:
    return (a + b) / 2


def _fmt_end(e: Endpoint, low: bool) -> str:
    if e is None:
        return "-inf" if low else "+inf"
    return fmt_rat(e)


def _lo_lt_hi(lo: Endpoint, hi: Endpoint) -> bool:
    return lo is None or hi is None or lo < hi


def _max_lo(a: Endpoint, b: Endpoint) -> Endpoint:
    if a is None:
        return b
    if b is None:
        return a
    return max(a, b)


def _min_hi(a: Endpoint, b: Endpoint) -> Endpoint:
    if a is None:
        return b
    if b is None:
        return a
    return min(a, b)


def _hi_le_lo(hi: Endpoint, lo: Endpoint) -> bool:
    """True when an interval ending at ``hi`` lies entirely left of one starting at ``lo``."""
    return hi is not None and lo is not None and hi <= lo


@dataclass(frozen=True, order=False)
class Interval:
    """Open interval (lo, hi); ``None`` marks an infinite end."""

    lo: Endpoint
    hi: Endpoint

    def __post_init__(self):
        lo = None if self.lo is None else rat(self.lo)
        hi = None if self.hi is None else rat(self.hi)
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "hi", hi)
        if not _lo_lt_hi(lo, hi):
            raise ValueError(f"empty interval ({lo}, {hi})")

    def __contains__(self, x) -> bool:
        return (self.lo is None or self.lo < x) and (self.hi is None or x < self.hi)

    @property
    def bounded(self) -> bool:
        return self.lo is not None and self.hi is not None

    def sample(self) -> Fraction:
        """A deterministic interior point: the midpoint, or one unit inside a ray."""
        if self.lo is None and self.hi is None:
            return Fraction(0)
        if self.lo is None:
            return self.hi - 1
        if self.hi is None:
            return self.lo + 1
        return midpoint(self.lo, self.hi)

    def image(self, fn: Callable[[Fraction], Fraction]) -> "Interval":
        """Image under an increasing bijection of the rationals."""
        lo = None if self.lo is None else fn(self.lo)
        hi = None if self.hi is None else fn(self.hi)
        return Interval(lo, hi)

    def _key(self):
        return (self.lo is not None, self.lo if self.lo is not None else 0)

    def __str__(self):
        return f"({_fmt_end(self.lo, True)},{_fmt_end(self.hi, False)})"


def _canonical(parts: Iterable[Interval]) -> tuple[Interval, ...]:
    ordered = sorted(parts, key=Interval._key)
    out: list[Interval] = []
    for part in ordered:
        if out and not _hi_le_lo(out[-1].hi, part.lo):
            prev = out.pop()
            hi = None if prev.hi is None or part.hi is None else max(prev.hi, part.hi)
            part = Interval(prev.lo, hi)
        out.append(part)
    return tuple(out)


class IntervalSet:
    """
    Finite union of open intervals in canonical form.

    Parts are sorted and pairwise disjoint. Two parts may share an endpoint,
    since that endpoint belongs to neither of them; they are never merged.
    Instances are immutable and hashable.
    """

    __slots__ = ("_parts", "_hash")

    def __init__(self, parts: Iterable = ()):
        items = []
        for p in parts:
            items.append(p if isinstance(p, Interval) else Interval(*p))
        object.__setattr__(self, "_parts", _canonical(items))
        object.__setattr__(self, "_hash", None)

    def __setattr__(self, name, value):
        raise AttributeError("IntervalSet is immutable")

    @classmethod
    def line(cls) -> "IntervalSet":
        return cls([Interval(None, None)])

    @property
    def parts(self) -> tuple[Interval, ...]:
        return self._parts

    def __iter__(self) -> Iterator[Interval]:
        return iter(self._parts)

    def __len__(self):
        return len(self._parts)

    def __bool__(self):
        return bool(self._parts)

    def __eq__(self, other):
        if not isinstance(other, IntervalSet):
            return NotImplemented
        return self._parts == other._parts

    def __hash__(self):
        if self._hash is None:
            object.__setattr__(self, "_hash", hash(self._parts))
        return self._hash

    def __repr__(self):
        return f"IntervalSet({str(self)!r})"

    def __str__(self):
        if not self._parts:
            return "∅"
        return "∪".join(str(p) for p in self._parts)

    def contains(self, x) -> bool:
        return any(x in p for p in self._parts)

    __contains__ = contains

    def union(self, other: "IntervalSet") -> "IntervalSet":
        return IntervalSet(self._parts + other._parts)

    def intersection(self, other: "IntervalSet") -> "IntervalSet":
        out = []
        i = j = 0
        a, b = self._parts, other._parts
        while i < len(a) and j < len(b):
            lo = _max_lo(a[i].lo, b[j].lo)
            hi = _min_hi(a[i].hi, b[j].hi)
            if _lo_lt_hi(lo, hi):
                out.append(Interval(lo, hi))
            # advance whichever part ends first
            if a[i].hi is None or (b[j].hi is not None and b[j].hi < a[i].hi):
                j += 1
            else:
                i += 1
        return IntervalSet(out)

    def exterior(self) -> "IntervalSet":
        """Complement of the closure: the largest open set disjoint from self."""
        gaps = []
        cursor: Endpoint = None
        started = False
        for p in self._parts:
            if p.lo is not None and (not started or (cursor is not None and cursor < p.lo)):
                gaps.append(Interval(cursor if started else None, p.lo))
            started = True
            cursor = p.hi
            if cursor is None:
                break
        if not started:
            return IntervalSet.line()
        if cursor is not None:
            gaps.append(Interval(cursor, None))
        return IntervalSet(gaps)

    def difference(self, other: "IntervalSet") -> "IntervalSet":
        return self.intersection(other.exterior())

    def complement(self, within: Optional[Interval] = None) -> "IntervalSet":
        bound = IntervalSet([within]) if within is not None else IntervalSet.line()
        return bound.difference(self)

    def issubset(self, other: "IntervalSet") -> bool:
        return self.intersection(other) == self

    def isdisjoint(self, other: "IntervalSet") -> bool:
        return not self.intersection(other)

    def image(self, fn: Callable[[Fraction], Fraction]) -> "IntervalSet":
        return IntervalSet(p.image(fn) for p in self._parts)

    def endpoints(self) -> list[Fraction]:
        out = []
        for p in self._parts:
            out.extend(e for e in (p.lo, p.hi) if e is not None)
        return out

    def sample(self) -> Fraction:
        if not self._parts:
            raise ValueError("empty IntervalSet has no points")
        return self._parts[0].sample()

    __or__ = union
    __and__ = intersection
    __sub__ = difference


def relate(a: IntervalSet, b: IntervalSet) -> str:
    """Classify two sets as disjoint, equal, subset, superset or overlapping."""
    common = a.intersection(b)
    if not common:
        return "disjoint"
    if a == b:
        return "equal"
    if common == a:
        return "subset"
    if common == b:
        return "superset"
    return "overlapping"


_INTERVAL_RE = re.compile(r"\(([^,()]+),([^,()]+)\)")


def _parse_end(text: str, low: bool, where: int) -> Endpoint:
    if text == ("-inf" if low else "+inf"):
        return None
    try:
        return parse_rat(text)
    except ParseError:
        raise ParseError(f"bad endpoint {text!r}", 1, where + 1) from None


def parse_interval_set(text: str) -> IntervalSet:
    """Parse the "(lo,hi)∪(lo,hi)" rendering, "∅" for the empty set."""
    text = text.strip()
    if text == "∅":
        return IntervalSet()
    parts = []
    pos = 0
    while True:
        m = _INTERVAL_RE.match(text, pos)
        if not m:
            raise ParseError("expected '(lo,hi)'", 1, pos + 1)
        lo = _parse_end(m.group(1), True, m.start(1))
        hi = _parse_end(m.group(2), False, m.start(2))
        try:
            parts.append(Interval(lo, hi))
        except ValueError:
            raise ParseError("empty interval", 1, pos + 1) from None
        pos = m.end()
        if pos == len(text):
            break
        if text[pos] != "∪":
            raise ParseError("expected '∪'", 1, pos + 1)
        pos += 1
    result = IntervalSet(parts)
    if result.parts != tuple(parts):
        raise ParseError("interval list is not in canonical form", 1, 1)
    return result
