"""
Finite lexicographic towers and their automorphisms.

A tower of depth ``n`` models Omega = Q^n ordered lexicographically with the
first coordinate most significant. Level ``L`` o-blocks are the sets of
points sharing a fixed prefix of length ``L - 1``; level 1 is Omega itself
and level ``n + 1`` blocks are singletons. A convex congruence is named by
its level, so a larger level number means a finer congruence.

An automorphism (:class:`LexAut`) has a top component map on the first
coordinate and finitely many fiber overrides, each an automorphism of the
depth ``n - 1`` tail tower:

    (x, rest) -> (x * top, rest * over[x])    # absent override = identity
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Optional, Sequence

from .errors import (
    ParseError,
    DepthOutOfRange,
    IdenticalPoints,
    ModelMismatch,
    NotInStabilizer,
    NotInvariant,
    OverlappingBlocks,
)
from .intervals import Interval, IntervalSet, fmt_rat, parse_rat, rat
from .plmap import PLMap, parse_plmap

PL2T = "PL2T"
REG = "REG"
KINDS = (PL2T, REG)
MAX_DEPTH = 5

Point = tuple  # tuple[Fraction, ...]


@dataclass(frozen=True)
class TowerModel:
    kinds: tuple[str, ...]

    def __post_init__(self):
        kinds = tuple(self.kinds)
        object.__setattr__(self, "kinds", kinds)
        if not 1 <= len(kinds) <= MAX_DEPTH:
            raise DepthOutOfRange(f"depth {len(kinds)} outside 1..{MAX_DEPTH}")
        for k in kinds:
            if k not in KINDS:
                raise ValueError(f"unknown component kind {k!r}")

    @classmethod
    def of(cls, *kinds: str) -> "TowerModel":
        return cls(tuple(kinds))

    @property
    def depth(self) -> int:
        return len(self.kinds)

    @property
    def locally_abelian(self) -> bool:
        return self.kinds[-1] == REG

    def kind_at(self, level: int) -> str:
        """Component kind acting on coordinate ``level`` (1-based)."""
        return self.kinds[level - 1]

    def tail(self, drop: int = 1) -> Optional["TowerModel"]:
        if drop >= self.depth:
            return None
        return TowerModel(self.kinds[drop:])

    def __str__(self):
        return ",".join(self.kinds)


def _check_component(kind: str, top: PLMap) -> None:
    if kind == REG and top.translation_amount() is None:
        raise ModelMismatch(f"REG component must be a translation, got {top}")


@dataclass(frozen=True)
class LexAut:
    model: TowerModel
    top: PLMap = PLMap()
    over: tuple = ()  # sorted tuple of (Fraction, LexAut), identities pruned

    def __post_init__(self):
        _check_component(self.model.kinds[0], self.top)
        items = self.over.items() if isinstance(self.over, dict) else self.over
        tail = self.model.tail()
        pruned = []
        for key, child in items:
            if tail is None:
                raise ModelMismatch("depth-1 automorphisms have no fiber overrides")
            if child.model != tail:
                raise ModelMismatch(f"override model {child.model} != {tail}")
            if not child.is_identity():
                pruned.append((rat(key), child))
        pruned.sort(key=lambda kv: kv[0])
        for (a, _), (b, _) in zip(pruned, pruned[1:]):
            if a == b:
                raise ValueError(f"duplicate override key {a}")
        object.__setattr__(self, "over", tuple(pruned))

    @classmethod
    def identity(cls, model: TowerModel) -> "LexAut":
        return cls(model)

    @cached_property
    def _over_map(self) -> dict:
        return dict(self.over)

    def node(self, x) -> "LexAut":
        """The tail automorphism applied inside fiber ``x``."""
        child = self._over_map.get(x)
        if child is None:
            return LexAut(self.model.tail())
        return child

    def is_identity(self) -> bool:
        return self.top.is_identity() and not self.over

    def _same_model(self, other: "LexAut") -> None:
        if not isinstance(other, LexAut) or other.model != self.model:
            raise ModelMismatch(f"model {getattr(other, 'model', other)} != {self.model}")

    # -- action ------------------------------------------------------------

    def apply(self, point: Sequence) -> Point:
        if len(point) != self.model.depth:
            raise ModelMismatch(f"point of length {len(point)} in depth-{self.model.depth} tower")
        out = []
        g = self
        for i, x in enumerate(point):
            out.append(g.top(x))
            if i + 1 < len(point):
                g = g._over_map.get(x)
                if g is None:
                    out.extend(point[i + 1:])
                    break
        return tuple(out)

    __call__ = apply

    def apply_prefix(self, prefix: Sequence) -> Point:
        """Image of a block prefix (the first ``len(prefix)`` coordinates)."""
        out = []
        g = self
        for i, x in enumerate(prefix):
            out.append(g.top(x))
            if i + 1 < len(prefix):
                g = g._over_map.get(x)
                if g is None:
                    out.extend(prefix[i + 1:])
                    break
        return tuple(out)

    def node_at(self, prefix: Sequence) -> "LexAut":
        """Tail automorphism carrying the block with ``prefix`` onto its image."""
        g = self
        for x in prefix:
            g = g.node(x)
        return g

    # -- group -------------------------------------------------------------

    def __mul__(self, other: "LexAut") -> "LexAut":
        self._same_model(other)
        keys = set(self._over_map)
        keys.update(self.top.preimage(y) for y in other._over_map)
        over = []
        if self.model.depth > 1:
            for x in keys:
                over.append((x, self.node(x) * other.node(self.top(x))))
        return LexAut(self.model, self.top * other.top, tuple(over))

    def inverse(self) -> "LexAut":
        over = tuple((self.top(x), child.inverse()) for x, child in self.over)
        return LexAut(self.model, self.top.inverse(), over)

    def __pow__(self, n: int) -> "LexAut":
        base = self if n >= 0 else self.inverse()
        out = LexAut(self.model)
        for _ in range(abs(n)):
            out = out * base
        return out

    # -- lattice -----------------------------------------------------------

    def _lattice(self, other: "LexAut", op: str) -> "LexAut":
        self._same_model(other)
        top = self.top.vee(other.top) if op == "vee" else self.top.wedge(other.top)
        over = []
        if self.model.depth > 1:
            for x in set(self._over_map) | set(other._over_map):
                a, b = self.top(x), other.top(x)
                if a == b:
                    child = self.node(x)._lattice(other.node(x), op)
                elif (a > b) == (op == "vee"):
                    child = self.node(x)
                else:
                    child = other.node(x)
                over.append((x, child))
        return LexAut(self.model, top, tuple(over))

    def vee(self, other: "LexAut") -> "LexAut":
        return self._lattice(other, "vee")

    def wedge(self, other: "LexAut") -> "LexAut":
        return self._lattice(other, "wedge")

    __or__ = vee
    __and__ = wedge

    def __str__(self):
        return format_lexaut(self)

    def __repr__(self):
        return f"LexAut({self.model}, {format_lexaut(self)!r})"


# -- text form ---------------------------------------------------------------


def format_component(kind: str, top: PLMap) -> str:
    if kind == REG:
        return fmt_rat(top.translation_amount())
    return str(top)


def format_lexaut(g: LexAut) -> str:
    over = ", ".join(f"{fmt_rat(x)}: {format_lexaut(c)}" for x, c in g.over)
    return f"Lex{{top: {format_component(g.model.kinds[0], g.top)}, over: {{{over}}}}}"


def format_point(p) -> str:
    if isinstance(p, Fraction):
        return fmt_rat(p)
    return "(" + ",".join(fmt_rat(x) for x in p) + ")"


# -- blocks and congruences ----------------------------------------------------


@dataclass(frozen=True)
class OBlock:
    """Points sharing ``prefix``; ``level == len(prefix) + 1``."""

    level: int
    prefix: tuple = ()

    def __post_init__(self):
        prefix = tuple(rat(x) for x in self.prefix)
        object.__setattr__(self, "prefix", prefix)
        if self.level != len(prefix) + 1:
            raise ValueError(f"level {self.level} needs a prefix of length {self.level - 1}")

    @classmethod
    def of(cls, *prefix) -> "OBlock":
        return cls(len(prefix) + 1, tuple(prefix))

    @classmethod
    def containing(cls, point: Sequence, level: int) -> "OBlock":
        return cls(level, tuple(point[: level - 1]))

    def contains(self, point: Sequence) -> bool:
        return tuple(point[: self.level - 1]) == self.prefix

    __contains__ = contains

    def child(self, x) -> "OBlock":
        return OBlock(self.level + 1, self.prefix + (rat(x),))

    def disjoint_from(self, other: "OBlock") -> bool:
        n = min(len(self.prefix), len(other.prefix))
        return self.prefix[:n] != other.prefix[:n]

    def image(self, g: LexAut) -> "OBlock":
        return OBlock(self.level, g.apply_prefix(self.prefix))

    def __str__(self):
        return f"B{self.level}" + format_point(self.prefix)


def _check_level(model: TowerModel, block: OBlock, allow_singleton: bool = False) -> None:
    top = model.depth + (1 if allow_singleton else 0)
    if not 1 <= block.level <= top:
        raise ModelMismatch(f"block level {block.level} outside 1..{top}")


def congr_V(alpha: Sequence, beta: Sequence) -> int:
    """Level of V(alpha, beta): the finest congruence relating the two points."""
    if tuple(alpha) == tuple(beta):
        raise IdenticalPoints("V is undefined for equal points")
    common = 0
    for a, b in zip(alpha, beta):
        if a != b:
            break
        common += 1
    return common + 1


def congr_U(alpha: Sequence, beta: Sequence) -> int:
    """Level of U(alpha, beta): the coarsest congruence separating the points."""
    return congr_V(alpha, beta) + 1


def congruence_contains(finer: int, coarser: int) -> bool:
    """Whether congruence level ``finer`` is contained in level ``coarser``."""
    return finer >= coarser


def covers(upper: int, lower: int) -> bool:
    """Whether congruence ``upper`` covers ``lower`` in the total order."""
    return lower == upper + 1


def kappa(block: OBlock) -> int:
    return block.level


def spine(model: TowerModel) -> list[tuple[int, tuple[Point, Point]]]:
    """Spine levels 1..depth, each with a pair of points realising it."""
    out = []
    for level in range(1, model.depth + 1):
        alpha = tuple(Fraction(0) for _ in range(model.depth))
        beta = list(alpha)
        beta[level - 1] = Fraction(1)
        out.append((level, (alpha, tuple(beta))))
    return out


# -- stabilizers ---------------------------------------------------------------


def in_st(g: LexAut, block: OBlock) -> bool:
    _check_level(g.model, block, allow_singleton=True)
    return g.apply_prefix(block.prefix) == block.prefix


def in_rst(g: LexAut, block: OBlock) -> bool:
    _check_level(g.model, block, allow_singleton=True)
    node = g
    for x in block.prefix:
        if not node.top.is_identity():
            return False
        if any(k != x for k, _ in node.over):
            return False
        node = node._over_map.get(x)
        if node is None:
            return True
    return True


def in_ptstab(g: LexAut, block: OBlock) -> bool:
    _check_level(g.model, block, allow_singleton=True)
    if block.level == g.model.depth + 1:
        return g.apply(block.prefix) == block.prefix
    if not in_st(g, block):
        return False
    return g.node_at(block.prefix).is_identity()


def in_Q(h: LexAut, block: OBlock) -> bool:
    """h lies in rst(block) and moves some point by exactly kappa(block)."""
    _check_level(h.model, block)
    return in_rst(h, block) and not h.node_at(block.prefix).top.is_identity()


def induced_action(g: LexAut, block: OBlock) -> PLMap:
    """Automorphism of the child blocks of ``block`` induced by ``g``."""
    _check_level(g.model, block)
    if not in_st(g, block):
        raise NotInStabilizer(f"{block} is not fixed setwise")
    return g.node_at(block.prefix).top


# -- support ----------------------------------------------------------------------


def support_cylinders(g: LexAut, prefix: tuple = ()) -> list[tuple[tuple, IntervalSet]]:
    """
    supp(g) as cylinders ``(p, I)``: the points whose first ``len(p)``
    coordinates equal ``p`` and whose next coordinate lies in ``I``.
    """
    out = []
    s = g.top.support()
    if s:
        out.append((prefix, s))
    for x, child in g.over:
        if not s.contains(x):
            out.extend(support_cylinders(child, prefix + (x,)))
    return out


def cylinder_image(g: LexAut, cyl: tuple[tuple, IntervalSet]) -> tuple[tuple, IntervalSet]:
    prefix, iset = cyl
    return g.apply_prefix(prefix), iset.image(g.node_at(prefix).top)


def cylinder_meets_block(cyl: tuple[tuple, IntervalSet], block: OBlock) -> bool:
    prefix, iset = cyl
    q = block.prefix
    if len(prefix) >= len(q):
        return prefix[: len(q)] == q and bool(iset)
    return q[: len(prefix)] == prefix and iset.contains(q[len(prefix)])


def cylinders_disjoint(a: list, b: list) -> bool:
    """Exact disjointness test for two cylinder lists."""
    from .intervals import relate

    for pa, ia in a:
        for pb, ib in b:
            if pa == pb:
                if relate(ia, ib) != "disjoint":
                    return False
            elif len(pa) < len(pb):
                if pb[: len(pa)] == pa and ia.contains(pb[len(pa)]):
                    return False
            else:
                if pa[: len(pb)] == pb and ib.contains(pa[len(pb)]):
                    return False
    return True


def _pad(model: TowerModel, prefix: tuple) -> Point:
    return tuple(prefix) + tuple(Fraction(0) for _ in range(model.depth - len(prefix)))


def moved_point(g: LexAut, block: Optional[OBlock] = None) -> Optional[Point]:
    """Some point of ``block`` (default Omega) moved by ``g``, or None."""
    block = block or OBlock(1)
    q = block.prefix
    if g.apply_prefix(q) != q:
        return _pad(g.model, q)
    node = g.node_at(q)
    if node.is_identity():
        return None
    prefix, iset = support_cylinders(node)[0]
    return _pad(g.model, q + prefix + (iset.sample(),))


def moved_point_in_cylinder(g: LexAut, cyl: tuple[tuple, IntervalSet]) -> Optional[Point]:
    """A point of the cylinder moved by ``g``, or None if g fixes it pointwise."""
    prefix, iset = cyl
    if not iset:
        return None
    if g.apply_prefix(prefix) != prefix:
        return _pad(g.model, prefix + (iset.sample(),))
    node = g.node_at(prefix)
    common = node.top.support().intersection(iset)
    if common:
        return _pad(g.model, prefix + (common.sample(),))
    for x, child in node.over:
        if iset.contains(x):
            inner = moved_point(child)
            return tuple(prefix) + (x,) + inner
    return None


def support_points(g: LexAut, count: int) -> list[Point]:
    """Deterministic sample of up to ``count`` distinct points of supp(g)."""
    pools = []
    for prefix, iset in support_cylinders(g):
        pts = []
        for part in iset:
            pts.extend(_interval_samples(part, count))
        tails = [Fraction(0), Fraction(1, 2), Fraction(-3)]
        depth_left = g.model.depth - len(prefix) - 1
        pool = []
        for t in tails:
            for x in pts:
                pool.append(tuple(prefix) + (x,) + tuple(t for _ in range(depth_left)))
        pools.append(pool)
    out: list[Point] = []
    seen = set()
    i = 0
    while len(out) < count and any(i < len(p) for p in pools):
        for pool in pools:
            if i < len(pool) and pool[i] not in seen and len(out) < count:
                seen.add(pool[i])
                out.append(pool[i])
        i += 1
    return out


def _interval_samples(part: Interval, n: int) -> list[Fraction]:
    if part.bounded:
        width = part.hi - part.lo
        return [part.lo + width * Fraction(k, n + 1) for k in range(1, n + 1)]
    base = part.sample()
    step = Fraction(-1) if part.lo is None else Fraction(1)
    return [base + step * k for k in range(n)]


# -- constructions -----------------------------------------------------------------


def embed(model: TowerModel, prefix: Sequence, node: LexAut) -> LexAut:
    """Element acting as ``node`` inside the block with ``prefix`` and trivially elsewhere."""
    prefix = tuple(rat(x) for x in prefix)
    expected = model.tail(len(prefix)) if prefix else model
    if node.model != expected:
        raise ModelMismatch("node does not match the block's tail tower")
    g = node
    for i in range(len(prefix) - 1, -1, -1):
        g = LexAut(TowerModel(model.kinds[i:]), PLMap(), ((prefix[i], g),))
    return g


def block_element(model: TowerModel, block: OBlock, component: PLMap) -> LexAut:
    """Element of rst(block) acting on the block's free coordinate by ``component``."""
    _check_level(model, block)
    tail = model.tail(block.level - 1)
    return embed(model, block.prefix, LexAut(tail, component))


def transporter(model: TowerModel, alpha: Sequence, beta: Sequence) -> LexAut:
    """An element sending ``alpha`` to ``beta`` (translation at every level)."""
    alpha, beta = tuple(map(rat, alpha)), tuple(map(rat, beta))
    if len(alpha) != model.depth or len(beta) != model.depth:
        raise ModelMismatch("points do not match the tower depth")
    top = PLMap.translation(beta[0] - alpha[0])
    if model.depth == 1:
        return LexAut(model, top)
    child = transporter(model.tail(), alpha[1:], beta[1:])
    return LexAut(model, top, ((alpha[0], child),))


def block_transporter(model: TowerModel, block: OBlock, alpha: Sequence, beta: Sequence) -> LexAut:
    """An element of rst(block) sending ``alpha`` to ``beta`` (both in the block)."""
    if alpha not in block or beta not in block:
        raise ValueError("both points must lie in the block")
    k = block.level - 1
    if k == 0:
        return transporter(model, alpha, beta)
    return embed(model, block.prefix, transporter(model.tail(k), alpha[k:], beta[k:]))


def restrict(g: LexAut, block: OBlock) -> LexAut:
    """dep(g, block) for a single g-invariant block."""
    if block.level == 1:
        return g
    return embed(g.model, block.prefix, g.node_at(block.prefix))


def lex_dep(g: LexAut, blocks: Iterable[OBlock]) -> LexAut:
    blocks = list(blocks)
    for i, a in enumerate(blocks):
        _check_level(g.model, a)
        for b in blocks[i + 1:]:
            if not a.disjoint_from(b):
                raise OverlappingBlocks(f"{a} and {b} overlap")
        if not in_st(g, a):
            raise NotInvariant(f"{a} is not invariant under g")
    out = LexAut(g.model)
    for b in blocks:
        out = out * restrict(g, b)
    return out


# -- parsing -------------------------------------------------------------------------


class _Reader:
    def __init__(self, text: str, line: int = 1):
        self.text = text
        self.pos = 0
        self.line = line

    def fail(self, msg: str):
        raise ParseError(msg, self.line, self.pos + 1)

    def expect(self, token: str) -> None:
        if not self.text.startswith(token, self.pos):
            self.fail(f"expected {token!r}")
        self.pos += len(token)

    def peek(self, token: str) -> bool:
        return self.text.startswith(token, self.pos)

    def until(self, stops: str) -> str:
        start = self.pos
        while self.pos < len(self.text) and self.text[self.pos] not in stops:
            self.pos += 1
        return self.text[start:self.pos]

    def rat(self, stops: str) -> Fraction:
        start = self.pos
        token = self.until(stops)
        try:
            return parse_rat(token)
        except ParseError:
            self.pos = start
            self.fail(f"bad rational {token!r}")

    def plmap(self) -> PLMap:
        start = self.pos
        depth = 0
        while self.pos < len(self.text):
            ch = self.text[self.pos]
            self.pos += 1
            if ch == "[":
                depth += 1
            elif ch == "]":
                depth -= 1
                if depth == 0:
                    break
        try:
            return parse_plmap(self.text[start:self.pos])
        except ParseError as exc:
            self.pos = start + exc.column - 1
            self.fail(str(exc).split(" (line")[0])

    def lexaut(self, model: TowerModel) -> LexAut:
        self.expect("Lex{top: ")
        if model.kinds[0] == REG:
            top = PLMap.translation(self.rat(","))
        else:
            if not self.peek("PL["):
                self.fail("expected 'PL[' component")
            top = self.plmap()
        self.expect(", over: {")
        over = []
        tail = model.tail()
        while not self.peek("}"):
            if over:
                self.expect(", ")
            key = self.rat(":")
            self.expect(": ")
            if tail is None:
                self.fail("depth-1 automorphisms have no overrides")
            over.append((key, self.lexaut(tail)))
        self.expect("}}")
        try:
            g = LexAut(model, top, tuple(over))
        except (ValueError, ModelMismatch) as exc:
            self.fail(str(exc))
        if g.over != tuple(over) or any(c.is_identity() for _, c in over):
            self.fail("override list is not canonical")
        return g


def parse_lexaut(text: str, model: TowerModel, line: int = 1) -> LexAut:
    r = _Reader(text.strip(), line)
    g = r.lexaut(model)
    if r.pos != len(r.text):
        r.fail("trailing characters")
    return g


def parse_point(text: str, line: int = 1):
    """Parse "(r1,...,rn)" to a tuple, or a bare rational to a Fraction."""
    text = text.strip()
    if not text.startswith("("):
        try:
            return parse_rat(text)
        except ParseError:
            raise ParseError(f"bad point {text!r}", line, 1) from None
    if not text.endswith(")"):
        raise ParseError("expected ')'", line, len(text))
    out = []
    col = 2
    for token in text[1:-1].split(","):
        try:
            out.append(parse_rat(token))
        except ParseError:
            raise ParseError(f"bad coordinate {token!r}", line, col) from None
        col += len(token) + 1
    return tuple(out)


def parse_model(text: str) -> TowerModel:
    kinds = tuple(k.strip() for k in text.split(","))
    for k in kinds:
        if k not in KINDS:
            raise ParseError(f"unknown component kind {k!r}")
    return TowerModel(kinds)
