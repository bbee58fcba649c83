"""
Piecewise-linear order-automorphisms of the rationals.

A map is a finite list of anchors ``(x_i, y_i)`` with both coordinates
strictly increasing; between anchors it interpolates affinely and outside
the anchor hull it has slope 1. Maps act on the right, so ``f * g`` means
"first f, then g", matching ``(x)(fg) = ((x)f)g``.

Canonical form keeps exactly the breakpoints (points where the slope
changes). A map with no breakpoint is a translation ``x + c`` and is stored
as the single anchor ``(0, c)``, or with no anchors when ``c == 0``.
"""

from __future__ import annotations

import bisect
import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import NonMonotonicInput, NotInvariant, ParseError
from .intervals import Interval, IntervalSet, fmt_rat, parse_rat, rat

Anchor = tuple[Fraction, Fraction]


def _slope(a: Anchor, b: Anchor) -> Fraction:
    return (b[1] - a[1]) / (b[0] - a[0])


def _check_increasing(values: Sequence[Fraction], what: str) -> None:
    for u, v in zip(values, values[1:]):
        if not u < v:
            raise NonMonotonicInput(f"{what} not strictly increasing at {u} >= {v}")


def _canonical(pts: tuple[Anchor, ...]) -> tuple[Anchor, ...]:
    if not pts:
        return ()
    slopes = [Fraction(1)] + [_slope(a, b) for a, b in zip(pts, pts[1:])] + [Fraction(1)]
    kept = tuple(p for i, p in enumerate(pts) if slopes[i] != slopes[i + 1])
    if kept:
        return kept
    shift = pts[0][1] - pts[0][0]
    return () if shift == 0 else ((Fraction(0), shift),)


@dataclass(frozen=True)
class PLMap:
    anchors: tuple[Anchor, ...] = ()
    _xs: tuple[Fraction, ...] = field(default=(), init=False, repr=False, compare=False)
    _ys: tuple[Fraction, ...] = field(default=(), init=False, repr=False, compare=False)

    def __post_init__(self):
        pts = tuple(
            (x, y) if type(x) is Fraction and type(y) is Fraction else (rat(x), rat(y))
            for x, y in self.anchors
        )
        _check_increasing([p[0] for p in pts], "anchor x")
        _check_increasing([p[1] for p in pts], "anchor y")
        pts = _canonical(pts)
        object.__setattr__(self, "anchors", pts)
        object.__setattr__(self, "_xs", tuple(p[0] for p in pts))
        object.__setattr__(self, "_ys", tuple(p[1] for p in pts))

    @classmethod
    def identity(cls) -> "PLMap":
        return _IDENTITY

    @classmethod
    def translation(cls, c) -> "PLMap":
        return cls(((Fraction(0), rat(c)),))

    # -- evaluation --------------------------------------------------------

    @staticmethod
    def _interp(xs, ys, x: Fraction) -> Fraction:
        if not xs:
            return x
        if x <= xs[0]:
            return ys[0] + (x - xs[0])
        if x >= xs[-1]:
            return ys[-1] + (x - xs[-1])
        i = bisect.bisect_right(xs, x)
        x0, x1, y0, y1 = xs[i - 1], xs[i], ys[i - 1], ys[i]
        return y0 + (y1 - y0) * (x - x0) / (x1 - x0)

    def __call__(self, x) -> Fraction:
        return self._interp(self._xs, self._ys, x)

    apply = __call__

    def preimage(self, y) -> Fraction:
        return self._interp(self._ys, self._xs, y)

    # -- group structure ---------------------------------------------------

    def is_identity(self) -> bool:
        return not self.anchors

    def translation_amount(self):
        """The shift ``c`` if this map is ``x + c``, else ``None``."""
        if not self.anchors:
            return Fraction(0)
        if len(self.anchors) == 1 and self.anchors[0][0] == 0:
            return self.anchors[0][1]
        return None

    def inverse(self) -> "PLMap":
        return PLMap(tuple((y, x) for x, y in self.anchors))

    def __mul__(self, other: "PLMap") -> "PLMap":
        if not isinstance(other, PLMap):
            return NotImplemented
        # breakpoints of f*g: those of f, and preimages under f of those of g;
        # at each one, one of the two values is already an anchor
        pts = {x: other(y) for x, y in self.anchors}
        for u, v in other.anchors:
            pts[self.preimage(u)] = v
        return PLMap(tuple(sorted(pts.items())))

    def __pow__(self, n: int) -> "PLMap":
        base = self if n >= 0 else self.inverse()
        out = _IDENTITY
        for _ in range(abs(n)):
            out = out * base
        return out

    def reflect(self) -> "PLMap":
        """Conjugate by the order-reversing map x -> -x."""
        return PLMap(tuple((-x, -y) for x, y in reversed(self.anchors)))

    # -- lattice -----------------------------------------------------------

    def _lattice(self, other: "PLMap", pick) -> "PLMap":
        xs = sorted(set(self._xs) | set(other._xs))
        if not xs:
            return _IDENTITY
        mine, theirs = dict(self.anchors), dict(other.anchors)
        fs = [mine[x] if x in mine else self(x) for x in xs]
        gs = [theirs[x] if x in theirs else other(x) for x in xs]
        out = []
        for i, x in enumerate(xs):
            out.append((x, pick(fs[i], gs[i])))
            if i + 1 < len(xs):
                da, db = fs[i] - gs[i], fs[i + 1] - gs[i + 1]
                if da * db < 0:
                    # both maps are affine on [x, next]: they cross exactly once
                    t = da / (da - db)
                    out.append((x + t * (xs[i + 1] - x), fs[i] + t * (fs[i + 1] - fs[i])))
        return PLMap(tuple(out))

    def vee(self, other: "PLMap") -> "PLMap":
        return self._lattice(other, max)

    def wedge(self, other: "PLMap") -> "PLMap":
        return self._lattice(other, min)

    __or__ = vee
    __and__ = wedge

    def __le__(self, other: "PLMap") -> bool:
        return self.vee(other) == other

    # -- support -----------------------------------------------------------

    def support(self) -> IntervalSet:
        """Exact set of moved points as a canonical IntervalSet."""
        if not self.anchors:
            return IntervalSet()
        crit = list(self._xs)
        for (x0, y0), (x1, y1) in zip(self.anchors, self.anchors[1:]):
            d0, d1 = y0 - x0, y1 - x1
            if d0 * d1 < 0:
                crit.append(x0 + d0 / (d0 - d1) * (x1 - x0))
        crit.sort()
        gaps = [Interval(None, crit[0])]
        gaps += [Interval(a, b) for a, b in zip(crit, crit[1:])]
        gaps.append(Interval(crit[-1], None))
        moved = [g for g in gaps if self(g.sample()) != g.sample()]
        # reconnect gaps across critical points that are themselves moved
        merged: list[Interval] = []
        for g in moved:
            if merged and merged[-1].hi == g.lo and self(g.lo) != g.lo:
                merged[-1] = Interval(merged[-1].lo, g.hi)
            else:
                merged.append(g)
        return IntervalSet(merged)

    def fixes(self, x) -> bool:
        return self(x) == x

    def __str__(self):
        return "PL[" + ",".join(f"({fmt_rat(x)},{fmt_rat(y)})" for x, y in self.anchors) + "]"

    def __repr__(self):
        return f"PLMap({str(self)!r})"


_IDENTITY = PLMap()

_PL_RE = re.compile(r"PL\[(.*)\]", re.S)
_PAIR_RE = re.compile(r"\(([^,()]+),([^,()]+)\)")


def parse_plmap(text: str) -> PLMap:
    """Parse "PL[(x1,y1),...]"; only canonical renderings are accepted."""
    text = text.strip()
    m = _PL_RE.fullmatch(text)
    if not m:
        raise ParseError("expected 'PL[...]'", 1, 1)
    body = m.group(1)
    pts = []
    pos = 0
    while pos < len(body):
        pm = _PAIR_RE.match(body, pos)
        if not pm:
            raise ParseError("expected '(x,y)'", 1, pos + 4)
        try:
            pts.append((parse_rat(pm.group(1)), parse_rat(pm.group(2))))
        except ParseError as exc:
            raise ParseError(str(exc).split(" (line")[0], 1, pos + 4) from None
        pos = pm.end()
        if pos < len(body):
            if body[pos] != ",":
                raise ParseError("expected ','", 1, pos + 4)
            pos += 1
            if pos == len(body):
                raise ParseError("trailing ','", 1, pos + 4)
    try:
        f = PLMap(tuple(pts))
    except NonMonotonicInput as exc:
        raise ParseError(str(exc), 1, 1) from None
    if f.anchors != tuple(pts):
        raise ParseError("anchor list is not canonical", 1, 1)
    return f


# -- constructions -----------------------------------------------------------


def interpolate(points: Iterable[tuple]) -> PLMap:
    """The PL map sending each ``xi`` to ``yi``, with slope-1 tails."""
    pts = [(rat(x), rat(y)) for x, y in points]
    if not pts:
        raise NonMonotonicInput("at least one point is required")
    _check_increasing([p[0] for p in pts], "source points")
    _check_increasing([p[1] for p in pts], "target points")
    return PLMap(tuple(pts))


def interpolate_between(src: Sequence, dst: Sequence) -> PLMap:
    if len(src) != len(dst):
        raise NonMonotonicInput(f"length mismatch {len(src)} != {len(dst)}")
    return interpolate(zip(src, dst))


def bump(mu1, gamma1, gamma2, mu2) -> PLMap:
    """Positive map supported on (mu1, mu2) sending gamma1 to gamma2."""
    mu1, gamma1, gamma2, mu2 = map(rat, (mu1, gamma1, gamma2, mu2))
    if not mu1 < gamma1 < gamma2 < mu2:
        raise NonMonotonicInput("bump needs mu1 < gamma1 < gamma2 < mu2")
    return PLMap(((mu1, mu1), (gamma1, gamma2), (mu2, mu2)))


def dep(f: PLMap, lam: IntervalSet) -> PLMap:
    """Agree with ``f`` on ``lam`` and with the identity elsewhere."""
    for part in lam:
        for end in (part.lo, part.hi):
            if end is not None and f(end) != end:
                raise NotInvariant(f"{part} is not invariant: {end} moves to {f(end)}")
    pts: list[Anchor] = []
    for part in lam:
        if part.lo is not None:
            pts.append((part.lo, part.lo))
        for x, y in f.anchors:
            if x in part:
                pts.append((x, y))
        if part.hi is not None:
            pts.append((part.hi, part.hi))
    # an unbounded part keeps f's tail; pin f's value there if f has no anchor inside
    if pts and lam.parts and lam.parts[0].lo is None and (not f.anchors or f.anchors[0][0] not in lam.parts[0]):
        first = lam.parts[0]
        probe = first.sample()
        pts.insert(0, (probe, f(probe)))
    if pts and lam.parts and lam.parts[-1].hi is None and (not f.anchors or f.anchors[-1][0] not in lam.parts[-1]):
        last = lam.parts[-1]
        probe = last.sample()
        pts.append((probe, f(probe)))
    if not pts:
        if lam.parts and lam.parts[0].lo is None and lam.parts[0].hi is None:
            return f
        return _IDENTITY
    pts = sorted(set(pts))
    return PLMap(tuple(pts))


def conj(g, f):
    """g^f = f^-1 g f (works for any element type with ``inverse`` and ``*``)."""
    return f.inverse() * g * f


def comm(f, g):
    """[f, g] = f^-1 g^-1 f g."""
    return f.inverse() * g.inverse() * f * g


def maps_family_setwise(f: PLMap, family: Sequence[Interval]) -> bool:
    images = {s.image(f) for s in family}
    return images == set(family)


def fixes_each(f: PLMap, family: Sequence[Interval]) -> bool:
    return all(s.image(f) == s for s in family)
